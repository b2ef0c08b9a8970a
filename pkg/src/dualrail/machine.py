"""The two-switch single-photon interferometer machine and its noisy runs.

Five optical modes a, b, c, d, e (indices 0..4); input |abcde> = |01010>.
The pipeline, applied left to right, is

    B_cd  ->  gate 1  ->  [projective correction]  ->  S_a(pi)  ->  gate 2  ->  B_cd^dag

where both gates are Fredkin gates acting on (a, b, e) for switch k1 = 0 and
on (a, b, c) for k1 = 1.  Noise-free, the machine ends in |0101> for k1 = 0
and |0110> for k1 = 1, and the function class is read from the mode-d
detector: a click answers for k1 = 0, no click for k1 = 1.

Two error figures are exposed.  ``RunResult.p_error`` scores the mode-d
readout against the correct class; without post-selection it additionally
charges half of the probability of lone-photon outcomes left on the noisy
gate's Kerr-cell rails, since a run that lost its partner photon inside the
cell carries no which-rail information.  With this scoring the uncorrected
lossy machine reproduces the closed form (1 + e^-g - 2 e^(-3g/2))/4 exactly.
``which_path_error`` instead scores the a/b interferometer (a photon exiting
in mode a took the wrong path); for k1 = 0, where every valid outcome clicks
d and the readout is uninformative, this is the figure the dephasing
experiments and the projective correction act on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .channels import (
    KrausChannel,
    NoiseParams,
    amplitude_damping_channel,
    balanced_lossy_fredkin_channel,
    compose,
    dephased_fredkin_channel,
    dephased_fredkin_mc,
    fredkin_channel,
    lossy_fredkin_channel,
    unitary_channel,
)
from .correction import (
    ZeroAcceptanceError,
    legal_subspace,
    project_onto,
    projective_ec_step,
)
from .fock import (
    DensityOperator,
    FockError,
    FockSpace,
    OccupationVector,
    PureState,
    apply_unitary,
    basis_pure,
    diagonal_distribution,
    partial_trace,
)
from .gates import (
    beamsplitter_unitary,
    fredkin_unitary,
    kerr_unitary,
    phase_shift_unitary,
)

MODE_A, MODE_B, MODE_C, MODE_D, MODE_E = range(5)

NOISE_MODELS = ("none", "loss", "balanced-loss", "dephasing")
GATE_TAGS = ("first", "second")


def machine_space(cutoff: int = 1) -> FockSpace:
    return FockSpace(5, cutoff)


def machine_input(space: FockSpace) -> PureState:
    return basis_pure(space, (0, 1, 0, 1, 0) + (0,) * (space.n_modes - 5))


def gate_modes(k1: int) -> tuple[int, int, int]:
    """Fredkin modes for a switch setting: (a, b, e) for k1=0, (a, b, c) for k1=1."""
    return (MODE_A, MODE_B, MODE_C) if k1 == 1 else (MODE_A, MODE_B, MODE_E)


@dataclass(frozen=True)
class MachineConfig:
    """Switch settings, noise model, and correction strategy for one run."""

    k1: int
    k0: int = 0  # carried as a label only; does not alter the pipeline
    noise: NoiseParams = field(default_factory=NoiseParams)
    noise_model: str = "none"
    noisy_gates: tuple[str, ...] | None = None
    loss_placement: str = "after-kerr"
    projective_ec: bool = False
    projective_ec_both: bool = False
    dualrail_postselect: bool = False

    def __post_init__(self):
        if self.k1 not in (0, 1) or self.k0 not in (0, 1):
            raise FockError("k1 and k0 must be 0 or 1")
        if self.noise_model not in NOISE_MODELS:
            raise FockError(f"noise_model must be one of {NOISE_MODELS}")
        if self.noisy_gates is not None:
            bad = set(self.noisy_gates) - set(GATE_TAGS)
            if bad:
                raise FockError(f"unknown gate tags {sorted(bad)}")
        if self.projective_ec and self.noise_model in ("loss", "balanced-loss"):
            raise FockError("projective correction requires a photon-number-preserving run")
        if self.projective_ec_both and not self.projective_ec:
            raise FockError("projective_ec_both requires projective_ec")

    def resolved_noisy_gates(self) -> tuple[str, ...]:
        """Default noise placement.

        Plain loss hits the second gate only; dephasing hits both gates; the
        balanced design damps every rail in both gates (that is what makes
        the two-photon weights come out as powers of e^-2gamma).
        """
        if self.noise_model == "none":
            return ()
        if self.noisy_gates is not None:
            return self.noisy_gates
        if self.noise_model == "loss":
            return ("second",)
        return ("first", "second")


@dataclass(frozen=True, eq=False)
class RunResult:
    """Final state and scored statistics of one machine run.

    ``output_state`` and ``outcome_distribution`` describe the machine output
    before any post-selection (the distribution over modes a-d sums to 1);
    ``p_accept`` and ``p_error`` carry the post-selected statistics.
    """

    config: MachineConfig
    output_state: DensityOperator
    outcome_distribution: tuple[tuple[OccupationVector, float], ...]
    p_accept: float
    p_error: float
    intermediate_states: tuple[PureState, ...] | None = None


@dataclass(frozen=True)
class SweepRecord:
    """Per-grid-point error and acceptance probabilities, one entry per strategy."""

    parameter: str
    value: float
    p_error: dict[str, float]
    p_accept: dict[str, float]


def _wrong_outcome(occ4: Sequence[int], k1: int) -> bool:
    # correct readout: mode d clicks for k1 = 0, stays dark for k1 = 1
    return occ4[MODE_D] == 1 if k1 == 1 else occ4[MODE_D] == 0


def _legal(occ4: Sequence[int]) -> bool:
    return occ4[0] + occ4[1] == 1 and occ4[2] + occ4[3] == 1


def _kerr_arm_modes(config: MachineConfig) -> tuple[int, ...]:
    _, m_b, m_c = gate_modes(config.k1)
    return tuple(m for m in (m_b, m_c) if m < 4)


def _score(dist4, config: MachineConfig) -> tuple[float, float]:
    """(p_error, dual-rail acceptance) for a final a-d outcome distribution."""
    k1 = config.k1
    arms = _kerr_arm_modes(config)
    if config.dualrail_postselect:
        accepted = sum(p for occ, p in dist4 if _legal(occ))
        if accepted <= 0.0:
            raise ZeroAcceptanceError("dual-rail post-selection accepted zero mass")
        wrong = sum(p for occ, p in dist4 if _legal(occ) and _wrong_outcome(occ, k1))
        return wrong / accepted, accepted
    wrong = sum(p for occ, p in dist4 if _legal(occ) and _wrong_outcome(occ, k1))
    lone = sum(p for occ, p in dist4
               if sum(occ) == 1 and any(occ[m] == 1 for m in arms))
    return wrong + 0.5 * lone, 1.0


def _gate_channel(space: FockSpace, config: MachineConfig, tag: str,
                  mc_samples: int | None, mc_seed: int | None):
    """Channel (or Monte-Carlo map) implementing one gate slot."""
    modes = gate_modes(config.k1)
    noisy = tag in config.resolved_noisy_gates()
    if not noisy:
        return fredkin_channel(space, *modes).apply
    model = config.noise_model
    if model == "loss":
        return lossy_fredkin_channel(space, *modes, config.noise.gamma,
                                     config.loss_placement).apply
    if model == "balanced-loss":
        if config.k1 == 1:
            return balanced_lossy_fredkin_channel(space, *modes, MODE_D,
                                                  config.noise.gamma).apply
        # k1 = 0: the gate couples (a, b, e) but the balanced design still
        # damps the four rail modes a-d equally.
        return _balanced_k0_channel(space, modes, config.noise.gamma).apply
    if model == "dephasing":
        if mc_samples is not None:
            gate_index = GATE_TAGS.index(tag)
            seed = [0 if mc_seed is None else mc_seed, gate_index]
            return dephased_fredkin_mc(space, *modes, config.noise.lam,
                                       mc_samples, seed)
        return dephased_fredkin_channel(space, *modes, config.noise.lam).apply
    raise FockError(f"unhandled noise model {model!r}")


def _balanced_k0_channel(space: FockSpace, modes: tuple[int, int, int],
                         gamma: float) -> KrausChannel:
    """Balanced loss for the k1 = 0 gate: B_ab, K_be, then damping on a-d, then B_ab^dag."""
    m_a, m_b, m_c = modes
    b = unitary_channel(beamsplitter_unitary(space, m_a, m_b))
    k = unitary_channel(kerr_unitary(space, m_b, m_c))
    chan = compose(k, b)
    for m in (MODE_A, MODE_B, MODE_C, MODE_D):
        chan = compose(amplitude_damping_channel(space, m, gamma), chan)
    return compose(unitary_channel(beamsplitter_unitary(space, m_a, m_b).dagger), chan)


def _propagated_legal_projector(space: FockSpace, config: MachineConfig) -> np.ndarray:
    """Legal span pushed through the ideal S_a and second gate (for late correction)."""
    sub = legal_subspace(space)
    s = phase_shift_unitary(space, MODE_A, math.pi).matrix
    f = fredkin_unitary(space, *gate_modes(config.k1)).matrix
    proj = np.zeros((space.dim, space.dim), dtype=complex)
    for state in sub.basis:
        v = f @ (s @ state.amplitudes)
        proj += np.outer(v, v.conj())
    return proj


def run(config: MachineConfig, mc_samples: int | None = None,
        mc_seed: int | None = None) -> RunResult:
    """Run the machine pipeline for one configuration.

    Passing ``mc_samples`` replaces the analytic dephasing channels with the
    seeded Monte-Carlo oracle (one independent phase stream per gate).
    """
    space = machine_space()
    bcd = beamsplitter_unitary(space, MODE_C, MODE_D)
    s_a = phase_shift_unitary(space, MODE_A, math.pi)
    sub = legal_subspace(space)

    rho = machine_input(space).density()
    rho = apply_unitary(rho, bcd)
    rho = _gate_channel(space, config, "first", mc_samples, mc_seed)(rho)
    p_accept = 1.0
    if config.projective_ec:
        rho, acc = projective_ec_step(rho, sub)
        p_accept *= acc
    rho = apply_unitary(rho, s_a)
    rho = _gate_channel(space, config, "second", mc_samples, mc_seed)(rho)
    if config.projective_ec_both:
        rho, acc = project_onto(rho, _propagated_legal_projector(space, config))
        p_accept *= acc
    rho = apply_unitary(rho, bcd.dagger)

    dist4 = tuple(diagonal_distribution(partial_trace(rho, (0, 1, 2, 3))))
    p_error, dualrail_acc = _score(dist4, config)
    p_accept *= dualrail_acc
    return RunResult(config, rho, dist4, p_accept, p_error)


def ideal_run(k1: int) -> RunResult:
    """Noise-free reference run, recording the pure intermediate states."""
    config = MachineConfig(k1=k1)
    space = machine_space()
    bcd = beamsplitter_unitary(space, MODE_C, MODE_D)
    s_a = phase_shift_unitary(space, MODE_A, math.pi)
    f = fredkin_unitary(space, *gate_modes(k1))

    psi = machine_input(space).amplitudes
    psi1 = bcd.matrix @ psi
    psi2 = f.matrix @ psi1
    psi3 = s_a.matrix @ psi2
    final = bcd.matrix.conj().T @ (f.matrix @ psi3)
    states = tuple(PureState(space, v) for v in (psi1, psi2, psi3))
    rho = PureState(space, final).density()
    dist4 = tuple(diagonal_distribution(partial_trace(rho, (0, 1, 2, 3))))
    p_error, acc = _score(dist4, config)
    return RunResult(config, rho, dist4, acc, p_error, intermediate_states=states)


def error_probability(result: RunResult, k1: int | None = None) -> float:
    """Mode-d readout error of a run, conditioned on any active post-selection.

    See the module docstring for the lone-photon charge applied to
    unpost-selected loss runs.  Raises ZeroAcceptanceError when
    post-selection accepts nothing.
    """
    config = result.config if k1 is None else replace(result.config, k1=k1)
    p_error, _ = _score(result.outcome_distribution, config)
    return p_error


def which_path_error(result: RunResult) -> float:
    """Probability that the a/b interferometer released its photon in mode a.

    Conditioned on dual-rail acceptance when the run post-selects.  This is
    the phase-noise figure of merit: for k1 = 0 the mode-d readout never
    errs, and what decoherence damages is the which-path purity of the a/b
    pair; the projective correction improves exactly this quantity, from the
    uncorrected (1 - e^-2lam)/2 to (1 - q)(6 + 5q)/(6(2 + q)), q = e^-lam.
    """
    dist = result.outcome_distribution
    if result.config.dualrail_postselect:
        accepted = sum(p for occ, p in dist if _legal(occ))
        if accepted <= 0.0:
            raise ZeroAcceptanceError("dual-rail post-selection accepted zero mass")
        return sum(p for occ, p in dist if _legal(occ) and occ[MODE_A] == 1) / accepted
    return sum(p for occ, p in dist if occ[MODE_A] == 1)


STRATEGY_FLAGS = {
    "none": dict(dualrail_postselect=False, projective_ec=False, projective_ec_both=False),
    "dualrail": dict(dualrail_postselect=True, projective_ec=False, projective_ec_both=False),
    "projective": dict(dualrail_postselect=False, projective_ec=True, projective_ec_both=False),
    "projective-both": dict(dualrail_postselect=False, projective_ec=True, projective_ec_both=True),
}


def sweep(template: MachineConfig, parameter: str, grid: Sequence[float],
          strategies: Sequence[str] = ("none",)) -> list[SweepRecord]:
    """Run the machine over a noise grid, once per correction strategy.

    ``parameter`` is "gamma" or "lam"; records are returned in grid order.
    """
    if parameter not in ("gamma", "lam"):
        raise FockError(f"unknown sweep parameter {parameter!r}")
    if len(grid) == 0:
        raise FockError("sweep grid is empty")
    unknown = set(strategies) - set(STRATEGY_FLAGS)
    if unknown:
        raise FockError(f"unknown strategies {sorted(unknown)}")
    records = []
    for value in grid:
        if value < 0:
            raise FockError(f"grid values must be >= 0, got {value}")
        noise = NoiseParams(gamma=value) if parameter == "gamma" else NoiseParams(lam=value)
        errors, accepts = {}, {}
        for name in strategies:
            config = replace(template, noise=noise, **STRATEGY_FLAGS[name])
            result = run(config)
            errors[name] = result.p_error
            accepts[name] = result.p_accept
        records.append(SweepRecord(parameter, float(value), errors, accepts))
    return records
