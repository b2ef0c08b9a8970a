"""Trace-preserving noise channels and the noisy Fredkin-gate superoperators.

Two noise families:

* amplitude damping (photon loss): per photon, survival amplitude
  exp(-gamma/2), population decay exp(-gamma), with the lost photon handed
  to an unobserved environment;
* Kerr dephasing: a random phase eps imprinted on everything passing
  through the Kerr cell, Gaussian with <exp(i k eps)> = exp(-k^2 lambda),
  which suppresses coherences between photon-number sectors of the cell.

Channels are explicit Kraus lists so they compose generically; the
dephasing map also has an exact element-wise suppression form, and both
representations agree to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .fock import (
    KRAUS_COMPLETENESS_TOL,
    DensityOperator,
    FockError,
    FockSpace,
    LinearOperator,
    index_of,
    occupation_of,
)
from .gates import (
    beamsplitter_unitary,
    fredkin_unitary,
    kerr_unitary,
    number_operator_diagonal,
)

LOSS_PLACEMENTS = ("before-kerr", "after-kerr", "split")


@dataclass(frozen=True)
class NoiseParams:
    """Noise strengths: gamma for loss, lam for dephasing (both in nats)."""

    gamma: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise FockError(f"gamma must be finite and >= 0, got {self.gamma}")
        if not (self.lam >= 0):  # lam = inf is the fully dephasing limit
            raise FockError(f"lam must be >= 0, got {self.lam}")


def decibels(value: float) -> float:
    """Convert a damping exponent in nats to dB: 10 * value * log10(e)."""
    return 10.0 * value * math.log10(math.e)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map given by a finite Kraus list."""

    space: FockSpace
    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = self.space.dim
        ops = []
        for k in self.kraus_ops:
            k = np.asarray(k, dtype=complex)
            if k.shape != (d, d):
                raise FockError(f"Kraus operator has shape {k.shape}, expected ({d}, {d})")
            ops.append(k)
        total = sum(k.conj().T @ k for k in ops)
        dev = np.max(np.abs(total - np.eye(d)))
        if dev > KRAUS_COMPLETENESS_TOL:
            raise FockError(f"sum K^dag K deviates from identity by {dev:.2e}")
        object.__setattr__(self, "kraus_ops", tuple(ops))

    def apply(self, rho: DensityOperator) -> DensityOperator:
        if rho.space != self.space:
            raise FockError("channel and state live on different spaces")
        out = np.zeros_like(rho.matrix)
        for k in self.kraus_ops:
            out = out + k @ rho.matrix @ k.conj().T
        return DensityOperator(self.space, out)


def unitary_channel(u: LinearOperator) -> KrausChannel:
    """Wrap a unitary as a single-Kraus channel."""
    if not u.unitary:
        raise FockError("unitary_channel requires unitary=True")
    return KrausChannel(u.space, (u.matrix,))


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """Channel applying ``first`` then ``second``; Kraus list is the product set."""
    if second.space != first.space:
        raise FockError("channels live on different spaces")
    ops = tuple(k2 @ k1 for k2 in second.kraus_ops for k1 in first.kraus_ops)
    return KrausChannel(first.space, ops)


def _damping_kraus(space: FockSpace, mode: int, gamma: float) -> list[np.ndarray]:
    """Kraus family for photon loss on one mode.

    The k-photon jump operator has amplitudes
    sqrt(C(n, k)) * exp(-gamma (n - k)/2) * (1 - exp(-gamma))^(k/2)
    from |n> to |n-k>; for cutoff 1 this is the familiar pair
    diag(1, e^(-gamma/2)) and sqrt(1 - e^(-gamma)) * lowering.
    """
    if not (math.isfinite(gamma) and gamma >= 0):
        raise FockError(f"gamma must be finite and >= 0, got {gamma}")
    surv = math.exp(-gamma)
    ops = []
    for k in range(space.cutoff + 1):
        kop = np.zeros((space.dim, space.dim), dtype=complex)
        for i in range(space.dim):
            occ = occupation_of(space, i)
            n = occ[mode]
            if k > n:
                continue
            amp = math.sqrt(math.comb(n, k)) * surv ** ((n - k) / 2) * (1 - surv) ** (k / 2)
            if amp == 0.0:
                continue
            lowered = list(occ)
            lowered[mode] = n - k
            kop[index_of(space, lowered), i] = amp
        if np.any(kop != 0):
            ops.append(kop)
    return ops


def amplitude_damping_channel(space: FockSpace, mode: int, gamma: float) -> KrausChannel:
    """Photon loss of strength gamma on a single mode."""
    if not 0 <= mode < space.n_modes:
        raise FockError(f"mode {mode} outside [0, {space.n_modes})")
    return KrausChannel(space, tuple(_damping_kraus(space, mode, gamma)))


def _frame_conjugate(ops: Sequence[np.ndarray], remaining: np.ndarray) -> list[np.ndarray]:
    """Refer loss operators to the gate output frame.

    A loss event occurring before (part of) the cross-phase propagation is
    described by the jump operator commuted through the remaining Kerr
    unitary, L -> K_rem^dag L K_rem.  With this convention the loss commutes
    exactly with the phase accumulation, which is what makes the channel
    independent of where along the cell the damping is inserted.
    """
    return [remaining.conj().T @ op @ remaining for op in ops]


def _gate_sandwich(space: FockSpace, m_a: int, m_b: int,
                   stages: list[list[np.ndarray]]) -> KrausChannel:
    """B^dag (stages, applied in list order) B on the interferometer (m_a, m_b)."""
    b = beamsplitter_unitary(space, m_a, m_b).matrix
    ops = [b]
    for stage in stages:
        ops = [s @ o for s in stage for o in ops]
    ops = [b.conj().T @ o for o in ops]
    return KrausChannel(space, tuple(ops))


def lossy_fredkin_channel(space: FockSpace, m_a: int, m_b: int, m_c: int,
                          gamma: float, placement: str = "after-kerr") -> KrausChannel:
    """Fredkin gate with photon loss on the two Kerr-cell modes (m_b, m_c).

    ``placement`` selects where along the cell the loss acts: entirely after
    the cross-phase interaction, entirely before it, or split half/half.
    Loss operators are referred to the gate output frame (see
    ``_frame_conjugate``), so all three placements realize the identical
    channel; gamma is the total damping either way.
    """
    if placement not in LOSS_PLACEMENTS:
        raise FockError(f"placement must be one of {LOSS_PLACEMENTS}, got {placement!r}")
    k = kerr_unitary(space, m_b, m_c).matrix
    if placement == "after-kerr":
        stages = [[k], _damping_kraus(space, m_b, gamma), _damping_kraus(space, m_c, gamma)]
    elif placement == "before-kerr":
        stages = [
            _frame_conjugate(_damping_kraus(space, m_b, gamma), k),
            _frame_conjugate(_damping_kraus(space, m_c, gamma), k),
            [k],
        ]
    else:  # split
        stages = [
            _frame_conjugate(_damping_kraus(space, m_b, gamma / 2), k),
            _frame_conjugate(_damping_kraus(space, m_c, gamma / 2), k),
            [k],
            _damping_kraus(space, m_b, gamma / 2),
            _damping_kraus(space, m_c, gamma / 2),
        ]
    return _gate_sandwich(space, m_a, m_b, stages)


def balanced_lossy_fredkin_channel(space: FockSpace, m_a: int, m_b: int, m_c: int,
                                   m_d: int, gamma: float) -> KrausChannel:
    """Fredkin gate with equal loss on all four listed modes.

    The gate itself acts on (m_a, m_b, m_c) as usual; the damping also hits
    the bystander mode m_d, restoring the interferometric symmetry that
    makes post-selected outcomes error-free.
    """
    modes = (m_a, m_b, m_c, m_d)
    if len(set(modes)) != 4:
        raise FockError(f"modes {modes} must be distinct")
    k = kerr_unitary(space, m_b, m_c).matrix
    stages = [[k]]
    for m in modes:
        stages.append(_damping_kraus(space, m, gamma))
    return _gate_sandwich(space, m_a, m_b, stages)


def _pair_photon_numbers(space: FockSpace, m_b: int, m_c: int) -> np.ndarray:
    return number_operator_diagonal(space, m_b) + number_operator_diagonal(space, m_c)


def _suppression_factor(k: np.ndarray, lam: float) -> np.ndarray:
    """<exp(i k eps)> = exp(-k^2 lam) for integer k; safe at lam = inf."""
    k2 = np.asarray(k, dtype=float) ** 2
    with np.errstate(invalid="ignore"):
        out = np.exp(-k2 * lam)
    return np.where(k2 == 0, 1.0, out)


def dephased_fredkin_apply(space: FockSpace, m_a: int, m_b: int, m_c: int,
                           lam: float, rho: DensityOperator) -> DensityOperator:
    """Dephased Fredkin gate in element-wise suppression form.

    Applies B and K, multiplies each coherence between cell photon-number
    sectors N and N' by exp(-(N - N')^2 lam), then applies B^dag.  Exact
    Gaussian average of V(eps) rho V(eps)^dag; lam = inf keeps only the
    block-diagonal part.
    """
    if not lam >= 0:
        raise FockError(f"lam must be >= 0, got {lam}")
    b = beamsplitter_unitary(space, m_a, m_b).matrix
    k = kerr_unitary(space, m_b, m_c).matrix
    n = _pair_photon_numbers(space, m_b, m_c)
    mid = (k @ b) @ rho.matrix @ (k @ b).conj().T
    mid = mid * _suppression_factor(n[:, None] - n[None, :], lam)
    return DensityOperator(space, b.conj().T @ mid @ b)


def dephased_fredkin_channel(space: FockSpace, m_a: int, m_b: int, m_c: int,
                             lam: float) -> KrausChannel:
    """Kraus form of the dephased Fredkin gate.

    The suppression map acts only through the cell photon number
    N in {0, .., 2 cutoff}, so diagonalizing the (positive semidefinite)
    correlation matrix C[N, N'] = exp(-(N - N')^2 lam) yields one Kraus
    operator per nonzero eigenvalue, each of the form
    B^dag diag(w) K B.  Agrees with ``dephased_fredkin_apply`` to 1e-12.
    """
    if not lam >= 0:
        raise FockError(f"lam must be >= 0, got {lam}")
    n = _pair_photon_numbers(space, m_b, m_c).astype(int)
    levels = np.arange(n.max() + 1)
    corr = _suppression_factor(levels[:, None] - levels[None, :], lam)
    evals, evecs = np.linalg.eigh(corr)
    b = beamsplitter_unitary(space, m_a, m_b).matrix
    k = kerr_unitary(space, m_b, m_c).matrix
    kb = k @ b
    ops = []
    for w, v in zip(evals, evecs.T):
        if w < 1e-14:
            continue
        diag = math.sqrt(w) * v[n]
        ops.append(b.conj().T @ (diag[:, None] * kb))
    return KrausChannel(space, tuple(ops))


DensityMap = Callable[[DensityOperator], DensityOperator]


def dephased_fredkin_mc(space: FockSpace, m_a: int, m_b: int, m_c: int, lam: float,
                        n_samples: int, seed: int) -> DensityMap:
    """Monte-Carlo oracle for the dephased gate.

    Draws eps_i ~ Normal(0, 2 lam), so E[exp(i eps)] = exp(-lam), and returns
    the map rho -> (1/n) sum_i V(eps_i) rho V(eps_i)^dag.  The sum is
    evaluated through the empirical Gram matrix of the per-sample phase
    vectors, which is the literal sample mean rewritten; results are
    bit-reproducible for a fixed seed.  Entrywise standard error scales as
    1/sqrt(n_samples).
    """
    if n_samples < 1:
        raise FockError(f"n_samples must be >= 1, got {n_samples}")
    if not (math.isfinite(lam) and lam >= 0):
        raise FockError(f"lam must be finite and >= 0, got {lam}")
    rng = np.random.default_rng(seed)
    eps = rng.normal(0.0, math.sqrt(2 * lam), size=n_samples)
    n = _pair_photon_numbers(space, m_b, m_c)
    phases = np.exp(1j * np.outer(eps, n))               # (n_samples, dim)
    gram = (phases.T @ phases.conj()) / n_samples        # [m, m'] = mean e^{i eps (N_m - N_m')}
    b = beamsplitter_unitary(space, m_a, m_b).matrix
    k = kerr_unitary(space, m_b, m_c).matrix
    kb = k @ b

    def apply(rho: DensityOperator) -> DensityOperator:
        mid = kb @ rho.matrix @ kb.conj().T
        return DensityOperator(space, b.conj().T @ (mid * gram) @ b)

    return apply


def dephased_fredkin_ghq(space: FockSpace, m_a: int, m_b: int, m_c: int, lam: float,
                         nodes: int = 40) -> DensityMap:
    """Gauss-Hermite quadrature oracle for the Gaussian phase average.

    Integrates V(eps) rho V(eps)^dag against the Normal(0, 2 lam) weight with
    ``nodes`` abscissas; a second, independent check on the analytic channel.
    """
    if nodes < 1:
        raise FockError(f"nodes must be >= 1, got {nodes}")
    if not (math.isfinite(lam) and lam >= 0):
        raise FockError(f"lam must be finite and >= 0, got {lam}")
    x, w = np.polynomial.hermite.hermgauss(nodes)
    eps_values = 2.0 * math.sqrt(lam) * x
    weights = w / math.sqrt(math.pi)
    n = _pair_photon_numbers(space, m_b, m_c)
    b = beamsplitter_unitary(space, m_a, m_b).matrix
    k = kerr_unitary(space, m_b, m_c).matrix
    kb = k @ b

    def apply(rho: DensityOperator) -> DensityOperator:
        mid = kb @ rho.matrix @ kb.conj().T
        out = np.zeros_like(mid)
        for eps, wt in zip(eps_values, weights):
            phase = np.exp(1j * eps * n)
            out = out + wt * (phase[:, None] * mid * phase.conj()[None, :])
        return DensityOperator(space, b.conj().T @ out @ b)

    return apply


def fredkin_channel(space: FockSpace, m_a: int, m_b: int, m_c: int) -> KrausChannel:
    """Noise-free Fredkin gate as a channel."""
    return unitary_channel(fredkin_unitary(space, m_a, m_b, m_c))


def lambda_from_physical(omega: float, intensity: float) -> float:
    """Dephasing strength for a pi cross-phase shift: lam = pi * omega / intensity.

    ``omega`` is the medium resonant frequency [1/s]; ``intensity`` the pulse
    intensity [photons/s].
    """
    if intensity <= 0:
        raise FockError(f"intensity must be positive, got {intensity}")
    if omega < 0:
        raise FockError(f"omega must be >= 0, got {omega}")
    return math.pi * omega / intensity
