"""Multimode truncated Fock space, states, and dense linear-operator helpers.

Basis convention: a basis state is labeled by per-mode photon counts
``(n_0, .., n_{M-1})`` with each count in ``[0, cutoff]``.  Mode 0 is the
most significant digit of the basis index:

    index = sum_m n_m * (cutoff + 1)**(M - 1 - m)

so for five modes at cutoff 1 the occupation reads like a binary string.
This convention is normative for all file output produced by the CLI.

Everything here is immutable after construction and all operations are
pure functions, so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import expm as _scipy_expm

# Central numerical tolerances.  Tests import these, do not inline the values.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
UNITARITY_TOL = 1e-12
NORM_TOL = 1e-12
KRAUS_COMPLETENESS_TOL = 1e-10
PROB_OMIT_THRESHOLD = 1e-14

OccupationVector = tuple[int, ...]


class FockError(ValueError):
    """Rejected input: occupation, index, or operator outside the space."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FockSpace:
    """A register of ``n_modes`` bosonic modes truncated at ``cutoff`` photons each."""

    n_modes: int
    cutoff: int = 1

    def __post_init__(self):
        if self.n_modes < 1:
            raise FockError(f"n_modes must be positive, got {self.n_modes}")
        if self.cutoff < 1:
            raise FockError(f"cutoff must be >= 1, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.n_modes

    def occupations(self) -> Iterable[OccupationVector]:
        """All basis occupations in index order."""
        for i in range(self.dim):
            yield occupation_of(self, i)


def index_of(space: FockSpace, occ: Sequence[int]) -> int:
    """Basis index of an occupation vector (mode 0 most significant)."""
    occ = tuple(int(n) for n in occ)
    if len(occ) != space.n_modes:
        raise FockError(f"expected {space.n_modes} modes, got {len(occ)}")
    index = 0
    for n in occ:
        if not 0 <= n <= space.cutoff:
            raise FockError(f"occupation {occ} exceeds cutoff {space.cutoff}")
        index = index * (space.cutoff + 1) + n
    return index


def occupation_of(space: FockSpace, index: int) -> OccupationVector:
    """Inverse of :func:`index_of`."""
    if not 0 <= index < space.dim:
        raise FockError(f"index {index} outside [0, {space.dim})")
    base = space.cutoff + 1
    counts = []
    for m in range(space.n_modes):
        counts.append(index // base ** (space.n_modes - 1 - m) % base)
    return tuple(counts)


def occupation_label(occ: Sequence[int]) -> str:
    """Compact ket label, e.g. (0,1,0,1,0) -> '01010'."""
    return "".join(str(n) for n in occ)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over the Fock basis."""

    space: FockSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.space.dim,):
            raise FockError(f"amplitude vector has shape {amps.shape}, expected ({self.space.dim},)")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise FockError(f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    def density(self) -> "DensityOperator":
        return DensityOperator(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive, unit-trace matrix over the Fock basis."""

    space: FockSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.dim
        if m.shape != (d, d):
            raise FockError(f"matrix has shape {m.shape}, expected ({d}, {d})")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_TOL:
            raise FockError(f"Hermiticity violated by {herm:.2e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise FockError(f"trace {tr!r} deviates from 1 beyond {TRACE_TOL}")
        lo = np.linalg.eigvalsh((m + m.conj().T) / 2).min()
        if lo < EIGENVALUE_FLOOR:
            raise FockError(f"negative eigenvalue {lo:.2e} below floor {EIGENVALUE_FLOOR}")
        object.__setattr__(self, "matrix", _readonly(m))


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Dense operator on the full space; set ``unitary`` to enforce U^dag U = I."""

    space: FockSpace
    matrix: np.ndarray
    unitary: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.dim
        if m.shape != (d, d):
            raise FockError(f"matrix has shape {m.shape}, expected ({d}, {d})")
        if self.unitary:
            dev = np.max(np.abs(m.conj().T @ m - np.eye(d)))
            if dev > UNITARITY_TOL:
                raise FockError(f"unitarity violated by {dev:.2e}")
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dagger(self) -> "LinearOperator":
        return LinearOperator(self.space, self.matrix.conj().T, unitary=self.unitary)


def basis_pure(space: FockSpace, occ: Sequence[int]) -> PureState:
    """Basis ket |occ> as a pure state."""
    amps = np.zeros(space.dim, dtype=complex)
    amps[index_of(space, occ)] = 1.0
    return PureState(space, amps)


def basis_density(space: FockSpace, occ: Sequence[int]) -> DensityOperator:
    return basis_pure(space, occ).density()


def matrix_exponential(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a dense square complex matrix.

    Delegates to scipy's Pade scaling-and-squaring implementation, which
    meets the 1e-12 relative accuracy needed for the anti-Hermitian
    generators used by the gate constructors.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise FockError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise FockError("matrix contains non-finite entries")
    return _scipy_expm(a)


def apply_unitary(rho: DensityOperator, u: LinearOperator) -> DensityOperator:
    """Conjugate a density operator: rho -> U rho U^dag."""
    if u.space != rho.space:
        raise FockError("operator and state live on different spaces")
    m = u.matrix
    return DensityOperator(rho.space, m @ rho.matrix @ m.conj().T)


def diagonal_distribution(rho: DensityOperator) -> list[tuple[OccupationVector, float]]:
    """Measurement distribution over basis occupations.

    Entries below PROB_OMIT_THRESHOLD are omitted; the retained
    probabilities still sum to 1 within TRACE_TOL.
    """
    probs = np.real(np.diag(rho.matrix))
    out = []
    for i, p in enumerate(probs):
        if p > PROB_OMIT_THRESHOLD:
            out.append((occupation_of(rho.space, i), float(p)))
    return out


def marginal_mode_distribution(rho: DensityOperator, mode: int) -> np.ndarray:
    """Photon-number distribution of one mode, marginalized over the rest."""
    space = rho.space
    if not 0 <= mode < space.n_modes:
        raise FockError(f"mode {mode} outside [0, {space.n_modes})")
    probs = np.real(np.diag(rho.matrix))
    out = np.zeros(space.cutoff + 1)
    for i, p in enumerate(probs):
        out[occupation_of(space, i)[mode]] += p
    return out


def partial_trace(rho: DensityOperator, keep_modes: Sequence[int]) -> DensityOperator:
    """Reduced density operator on ``keep_modes`` (in ascending mode order)."""
    space = rho.space
    keep = sorted(set(int(m) for m in keep_modes))
    if not keep:
        raise FockError("keep_modes must be nonempty")
    if keep[0] < 0 or keep[-1] >= space.n_modes:
        raise FockError(f"keep_modes {keep} outside [0, {space.n_modes})")
    n, base = space.n_modes, space.cutoff + 1
    traced = [m for m in range(n) if m not in keep]
    tensor = rho.matrix.reshape((base,) * (2 * n))
    # Move kept axes to the front within each of the bra/ket halves.
    order = keep + traced
    perm = order + [n + m for m in order]
    tensor = np.transpose(tensor, perm)
    dk, dt = base ** len(keep), base ** len(traced)
    tensor = tensor.reshape(dk, dt, dk, dt)
    reduced = np.einsum("atbt->ab", tensor)
    return DensityOperator(FockSpace(len(keep), space.cutoff), reduced)
