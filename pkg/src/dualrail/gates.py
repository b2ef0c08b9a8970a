"""Optical gate unitaries: beamsplitter, Kerr cross-phase, phase shift, Fredkin.

All constructors return operators on the full space (identity on untouched
modes) so they compose freely; nothing acts in place.  Everything returned
is immutable, so the beamsplitter (the only constructor that pays for a
matrix exponential) is memoized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import (
    FockError,
    FockSpace,
    LinearOperator,
    index_of,
    matrix_exponential,
    occupation_of,
)


def annihilation_operator(space: FockSpace, mode: int) -> np.ndarray:
    """Truncated annihilation operator for one mode, embedded in the full space."""
    if not 0 <= mode < space.n_modes:
        raise FockError(f"mode {mode} outside [0, {space.n_modes})")
    a = np.zeros((space.dim, space.dim), dtype=complex)
    for i in range(space.dim):
        occ = occupation_of(space, i)
        n = occ[mode]
        if n > 0:
            lowered = list(occ)
            lowered[mode] = n - 1
            a[index_of(space, lowered), i] = math.sqrt(n)
    return a


def number_operator_diagonal(space: FockSpace, mode: int) -> np.ndarray:
    """Diagonal of the photon-number operator for one mode."""
    return np.array([occupation_of(space, i)[mode] for i in range(space.dim)], dtype=float)


def _check_distinct(space: FockSpace, *modes: int):
    if len(set(modes)) != len(modes):
        raise FockError(f"modes {modes} must be distinct")
    for m in modes:
        if not 0 <= m < space.n_modes:
            raise FockError(f"mode {m} outside [0, {space.n_modes})")


@lru_cache(maxsize=None)
def beamsplitter_unitary(space: FockSpace, mode_i: int, mode_j: int,
                         theta: float = math.pi / 4) -> LinearOperator:
    """50/50 beamsplitter B = exp[theta (a_i^dag a_j - a_j^dag a_i)] at theta = pi/4.

    Orientation: B|01> = (|01> + |10>)/sqrt(2) and B|10> = (|10> - |01>)/sqrt(2)
    on the two coupled modes.  Photon number in the pair is conserved, but the
    action on states with more total photons than ``cutoff`` allows per mode is
    truncated; use cutoff >= total pair occupation for exact two-photon physics.
    """
    _check_distinct(space, mode_i, mode_j)
    ai = annihilation_operator(space, mode_i)
    aj = annihilation_operator(space, mode_j)
    gen = theta * (ai.conj().T @ aj - aj.conj().T @ ai)
    return LinearOperator(space, matrix_exponential(gen), unitary=True)


def kerr_unitary(space: FockSpace, mode_i: int, mode_j: int,
                 chi: float = math.pi) -> LinearOperator:
    """Cross-phase modulation K = exp[i chi n_i n_j]; chi = pi gives the sign flip."""
    _check_distinct(space, mode_i, mode_j)
    ni = number_operator_diagonal(space, mode_i)
    nj = number_operator_diagonal(space, mode_j)
    return LinearOperator(space, np.diag(np.exp(1j * chi * ni * nj)), unitary=True)


def phase_shift_unitary(space: FockSpace, mode: int, phi: float) -> LinearOperator:
    """Single-mode phase shift exp[i phi n_mode]."""
    if not 0 <= mode < space.n_modes:
        raise FockError(f"mode {mode} outside [0, {space.n_modes})")
    n = number_operator_diagonal(space, mode)
    return LinearOperator(space, np.diag(np.exp(1j * phi * n)), unitary=True)


def fredkin_unitary(space: FockSpace, m_a: int, m_b: int, m_c: int) -> LinearOperator:
    """Optical Fredkin gate F = B^dag K B.

    The beamsplitters couple (m_a, m_b); the pi Kerr cell couples (m_b, m_c).
    On single-photon occupations this swaps modes m_a and m_b conditioned on a
    photon in m_c.  F is Hermitian, so F is its own inverse.
    """
    _check_distinct(space, m_a, m_b, m_c)
    b = beamsplitter_unitary(space, m_a, m_b)
    k = kerr_unitary(space, m_b, m_c)
    f = b.matrix.conj().T @ k.matrix @ b.matrix
    return LinearOperator(space, f, unitary=True)


def noisy_fredkin_sample(space: FockSpace, m_a: int, m_b: int, m_c: int,
                         epsilon: float) -> LinearOperator:
    """One random-phase realization of the Fredkin gate.

    The Kerr cell imprints an extra phase exp[i eps (n_b + n_c)] on the modes
    passing through it, between the cross-phase interaction and the closing
    beamsplitter:  V(eps) = B^dag exp[i eps (n_b + n_c)] K B.  V(0) = F.
    """
    _check_distinct(space, m_a, m_b, m_c)
    if not math.isfinite(epsilon):
        raise FockError(f"epsilon must be finite, got {epsilon}")
    b = beamsplitter_unitary(space, m_a, m_b)
    k = kerr_unitary(space, m_b, m_c)
    n_pair = number_operator_diagonal(space, m_b) + number_operator_diagonal(space, m_c)
    phase = np.exp(1j * epsilon * n_pair)
    v = b.matrix.conj().T @ (phase[:, None] * (k.matrix @ b.matrix))
    return LinearOperator(space, v, unitary=True)


_GATE_KINDS = ("beamsplitter", "kerr", "phase-shift", "fredkin", "fredkin-noisy")


@dataclass(frozen=True)
class GateSpec:
    """Declarative description of a gate, buildable on any compatible space.

    ``parameter`` carries the angle or phase; leaving it at 0 selects the
    canonical value (pi/4 beamsplitter, pi Kerr, the random phase for the
    noisy Fredkin).
    """

    kind: str
    modes: tuple[int, ...]
    parameter: float = 0.0

    def __post_init__(self):
        if self.kind not in _GATE_KINDS:
            raise FockError(f"unknown gate kind {self.kind!r}")
        if len(set(self.modes)) != len(self.modes):
            raise FockError(f"modes {self.modes} must be distinct")
        if not math.isfinite(self.parameter):
            raise FockError("gate parameter must be finite")

    def build(self, space: FockSpace) -> LinearOperator:
        if self.kind == "beamsplitter":
            i, j = self.modes
            theta = self.parameter if self.parameter else math.pi / 4
            return beamsplitter_unitary(space, i, j, theta)
        if self.kind == "kerr":
            i, j = self.modes
            chi = self.parameter if self.parameter else math.pi
            return kerr_unitary(space, i, j, chi)
        if self.kind == "phase-shift":
            (m,) = self.modes
            return phase_shift_unitary(space, m, self.parameter)
        if self.kind == "fredkin":
            return fredkin_unitary(space, *self.modes)
        return noisy_fredkin_sample(space, *self.modes, self.parameter)
