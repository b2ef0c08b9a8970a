"""Exact density-matrix simulation of lossy, decohering single-photon logic.

Dual-rail photonic qubits, an optical Fredkin gate built from beamsplitters
and a pi cross-phase Kerr cell, amplitude-damping and Kerr-dephasing noise
channels, the two-switch interferometer machine for the one-bit Deutsch
problem, and the error-correction strategies that go with it.
"""

from .channels import (
    KrausChannel,
    NoiseParams,
    amplitude_damping_channel,
    balanced_lossy_fredkin_channel,
    compose,
    decibels,
    dephased_fredkin_apply,
    dephased_fredkin_channel,
    dephased_fredkin_ghq,
    dephased_fredkin_mc,
    fredkin_channel,
    lambda_from_physical,
    lossy_fredkin_channel,
    unitary_channel,
)
from .correction import (
    LegalSubspace,
    SeriesFit,
    ZeroAcceptanceError,
    dualrail_postselect,
    fit_series,
    legal_subspace,
    p_accept_projective_closed,
    p_ec_closed,
    p_noec_closed,
    p_projective_closed,
    projective_ec_step,
    projective_ec_step_via_unitary,
    restore_unitary,
)
from .fock import (
    DensityOperator,
    FockError,
    FockSpace,
    LinearOperator,
    OccupationVector,
    PureState,
    apply_unitary,
    basis_density,
    basis_pure,
    diagonal_distribution,
    index_of,
    marginal_mode_distribution,
    matrix_exponential,
    occupation_label,
    occupation_of,
    partial_trace,
)
from .gates import (
    GateSpec,
    beamsplitter_unitary,
    fredkin_unitary,
    kerr_unitary,
    noisy_fredkin_sample,
    phase_shift_unitary,
)
from .machine import (
    MachineConfig,
    RunResult,
    SweepRecord,
    error_probability,
    gate_modes,
    ideal_run,
    machine_input,
    machine_space,
    run,
    sweep,
    which_path_error,
)

__version__ = "0.1.0"
