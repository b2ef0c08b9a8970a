"""Error-correction strategies: dual-rail post-selection and projective correction.

Dual-rail legality: each rail pair carries exactly one photon, so |01> and
|10> per pair are legal while |00>/|11> herald a lost or doubled photon.

Projective correction exploits a priori knowledge of the mid-computation
state: right after the first gate the noise-free machine is, for either
switch setting, inside the two-dimensional span of

    psi0 = (|0101> + |1010>)/sqrt(2)
    psi1 = (|0101> + 2|0110> - |1010>)/sqrt(6)

(labels are modes a, b, c, d; a fifth vacuum mode may trail).  Projecting
onto that span and renormalizing discards detectable phase errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    HERMITICITY_TOL,
    DensityOperator,
    FockError,
    FockSpace,
    LinearOperator,
    PureState,
    index_of,
    occupation_of,
)

DUAL_RAIL_PAIRS = ((0, 1), (2, 3))


class ZeroAcceptanceError(FockError):
    """Post-selection accepted zero probability mass; conditional stats undefined."""


def _legal_occupation(occ, pairs=DUAL_RAIL_PAIRS) -> bool:
    return all(occ[i] + occ[j] == 1 for i, j in pairs)


def dualrail_postselect(rho: DensityOperator,
                        pairs=DUAL_RAIL_PAIRS) -> tuple[DensityOperator, float]:
    """Keep only outcomes with one photon per rail pair.

    Returns the renormalized accepted state and the acceptance probability.
    Raises ZeroAcceptanceError when no legal mass remains.
    """
    space = rho.space
    mask = np.array([_legal_occupation(occupation_of(space, i), pairs)
                     for i in range(space.dim)])
    p_accept = float(np.real(np.diag(rho.matrix))[mask].sum())
    if p_accept <= 0.0:
        raise ZeroAcceptanceError("no probability mass passes dual-rail post-selection")
    proj = np.where(mask, 1.0, 0.0)
    accepted = rho.matrix * np.outer(proj, proj) / p_accept
    return DensityOperator(space, accepted), p_accept


@dataclass(frozen=True, eq=False)
class LegalSubspace:
    """Orthonormal basis of permitted mid-computation states plus its projector."""

    basis: tuple[PureState, ...]
    projector: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.basis)


def _embed(space: FockSpace, weights: dict[tuple[int, ...], float]) -> np.ndarray:
    """Amplitude vector for a combination of a-d occupations, vacuum elsewhere."""
    amps = np.zeros(space.dim, dtype=complex)
    pad = (0,) * (space.n_modes - 4)
    for occ4, w in weights.items():
        amps[index_of(space, occ4 + pad)] = w
    return amps


def legal_subspace(space: FockSpace) -> LegalSubspace:
    """The two-dimensional legal span {psi0, psi1} embedded in ``space``."""
    if space.n_modes < 4:
        raise FockError("legal subspace needs at least the four rail modes")
    psi0 = _embed(space, {(0, 1, 0, 1): 1 / math.sqrt(2), (1, 0, 1, 0): 1 / math.sqrt(2)})
    psi1 = _embed(space, {(0, 1, 0, 1): 1 / math.sqrt(6), (0, 1, 1, 0): 2 / math.sqrt(6),
                          (1, 0, 1, 0): -1 / math.sqrt(6)})
    proj = np.outer(psi0, psi0.conj()) + np.outer(psi1, psi1.conj())
    return LegalSubspace((PureState(space, psi0), PureState(space, psi1)), proj)


def project_onto(rho: DensityOperator, projector: np.ndarray) -> tuple[DensityOperator, float]:
    """Project, renormalize, and report the acceptance probability."""
    out = projector @ rho.matrix @ projector.conj().T
    p_accept = float(np.trace(out).real)
    if p_accept <= 0.0:
        raise ZeroAcceptanceError("projective correction accepted zero mass")
    return DensityOperator(rho.space, out / p_accept), p_accept


def projective_ec_step(rho: DensityOperator,
                       subspace: LegalSubspace | None = None) -> tuple[DensityOperator, float]:
    """Project the mid-computation state onto the legal span and renormalize.

    Only meaningful in a photon-number-preserving (no-loss) context.
    """
    if subspace is None:
        subspace = legal_subspace(rho.space)
    return project_onto(rho, subspace.projector)


def restore_unitary(space: FockSpace) -> LinearOperator:
    """Explicit unitary realization of the legal-span measurement.

    Maps psi0 -> |0101> and psi1 -> |1001> (both carry |01> on the last two
    rail modes), and sends the two orthogonal complement directions of the
    reachable four-state span to kets whose last two labels read |10>.
    Identity elsewhere.  Measuring modes c, d after this unitary and keeping
    outcome (0, 1), then undoing it, reproduces ``projective_ec_step`` on
    reachable states: the measurement cannot distinguish the two accepted
    images, so coherence inside the legal span survives.
    """
    sub = legal_subspace(space)
    psi0 = sub.basis[0].amplitudes
    psi1 = sub.basis[1].amplitudes
    # Orthogonal complement of the legal span inside the reachable 4-space.
    comp_a = _embed(space, {(0, 1, 0, 1): 1 / math.sqrt(3), (1, 0, 1, 0): -1 / math.sqrt(3),
                            (0, 1, 1, 0): -1 / math.sqrt(3)})
    comp_b = _embed(space, {(1, 0, 0, 1): 1.0})
    pad = (0,) * (space.n_modes - 4)
    targets = [
        _embed(space, {(0, 1, 0, 1): 1.0}),   # cd = 01, accepted
        _embed(space, {(1, 0, 0, 1): 1.0}),   # cd = 01, accepted
        _embed(space, {(0, 1, 1, 0): 1.0}),   # cd = 10, rejected
        _embed(space, {(1, 0, 1, 0): 1.0}),   # cd = 10, rejected
    ]
    sources = [psi0, psi1, comp_a, comp_b]
    u = np.eye(space.dim, dtype=complex)
    # Replace the action on the 4-space: U = sum |target><source| + identity outside.
    span_proj = sum(np.outer(s, s.conj()) for s in sources)
    u = u - span_proj + sum(np.outer(t, s.conj()) for t, s in zip(targets, sources))
    return LinearOperator(space, u, unitary=True)


def projective_ec_step_via_unitary(rho: DensityOperator) -> tuple[DensityOperator, float]:
    """Measurement-based realization: apply U, keep last-two-labels = (0, 1), undo U.

    Channel-identical to ``projective_ec_step`` on states supported in the
    reachable span (asserted by the test suite).
    """
    space = rho.space
    u = restore_unitary(space).matrix
    keep = np.array([occupation_of(space, i)[2] == 0 and occupation_of(space, i)[3] == 1
                     for i in range(space.dim)], dtype=float)
    rotated = u @ rho.matrix @ u.conj().T
    kept = rotated * np.outer(keep, keep)
    p_accept = float(np.trace(kept).real)
    if p_accept <= 0.0:
        raise ZeroAcceptanceError("measurement-based correction accepted zero mass")
    restored = u.conj().T @ (kept / p_accept) @ u
    return DensityOperator(space, restored), p_accept


def p_noec_closed(gamma: float) -> float:
    """Closed-form wrong-answer probability of the uncorrected lossy machine.

    (1 + e^-gamma - 2 e^(-3 gamma / 2)) / 4; grows as gamma/2 for small loss.
    """
    if gamma < 0:
        raise FockError(f"gamma must be >= 0, got {gamma}")
    return (1.0 + math.exp(-gamma) - 2.0 * math.exp(-1.5 * gamma)) / 4.0


def p_ec_closed(gamma: float) -> float:
    """Closed-form error after dual-rail post-selection.

    (1 - sech(gamma/2)) / 2; grows as gamma^2/16 for small loss.
    """
    if gamma < 0:
        raise FockError(f"gamma must be >= 0, got {gamma}")
    return (1.0 - 1.0 / math.cosh(gamma / 2.0)) / 2.0


def p_projective_closed(lam: float) -> float:
    """Exact error of the projectively corrected dephasing machine.

    With q = e^-lam:  (1 - q)(6 + 5q) / (6 (2 + q)), whose small-lam series
    starts 11 lam / 18 - 41 lam^2 / 108.
    """
    if lam < 0:
        raise FockError(f"lam must be >= 0, got {lam}")
    q = math.exp(-lam)
    return (1.0 - q) * (6.0 + 5.0 * q) / (6.0 * (2.0 + q))


def p_accept_projective_closed(lam: float) -> float:
    """Exact acceptance probability of the projective correction step: (2 + e^-lam)/3."""
    if lam < 0:
        raise FockError(f"lam must be >= 0, got {lam}")
    return (2.0 + math.exp(-lam)) / 3.0


@dataclass(frozen=True)
class SeriesFit:
    """Quadratic-through-origin fit p = c1 x + c2 x^2 with residual diagnostics."""

    c1: float
    c2: float
    max_rel_residual: float


def fit_series(points: list[tuple[float, float]], order: int = 2) -> SeriesFit:
    """Least-squares fit p = c1 x + c2 x^2 through the origin.

    Intended for small-parameter grids (x <= 0.05) where cubic contamination
    is negligible; ``max_rel_residual`` reports the worst relative misfit so
    callers can decide whether to trust the coefficients.
    """
    if order != 2:
        raise FockError("only order-2 fits are supported")
    if len(points) < 4:
        raise FockError("need at least 4 grid points for a stable quadratic fit")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.any(x <= 0) or len(np.unique(x)) < len(x):
        raise FockError("grid values must be positive and distinct")
    design = np.vstack([x, x ** 2]).T
    coeffs, *_ = np.linalg.lstsq(design, y, rcond=None)
    fitted = design @ coeffs
    scale = np.maximum(np.abs(y), np.finfo(float).tiny)
    max_rel = float(np.max(np.abs(fitted - y) / scale))
    return SeriesFit(float(coeffs[0]), float(coeffs[1]), max_rel)
