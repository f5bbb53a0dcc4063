"""Quantum dynamics of a damped cantilever coupled to a trapped ultracold ion.

The package propagates the two-mode squeezed trial state
``rho * exp(alpha1 a^+^2 + alpha2 a^+ b^+ + alpha3 b^+^2)|0>`` under the
non-Hermitian coupled-oscillator Hamiltonian, with and without the
counter-rotating (pair-creation) coupling terms, and validates the result
against closed-form eigenmode propagation and a brute-force truncated
number-basis oracle.
"""

from .dynamics import (
    AnsatzDerivative,
    IntegratorConfig,
    Trajectory,
    full_rhs,
    integrate,
    rwa_rhs,
)
from .errors import (
    AnsatzBreakdown,
    CantionError,
    DegenerateModes,
    LeakageExceeded,
    NormSingular,
    SimulationBreakdown,
    StepSizeUnderflow,
    TruncationTooSmall,
    ZeroNorm,
)
from .fock import (
    FockState,
    apply_hamiltonian,
    build_initial_fock,
    dt_convergence_gap,
    evolve_fock,
    fock_expand,
    fock_occupations,
)
from .model import AnsatzState, ModelKind, SystemParams, initial_ansatz
from .moments import (
    MomentRecord,
    mean_occupations,
    series_norm_partial,
    series_occupation_partial,
    state_norm,
)
from .presets import DEFAULT_DT_OUT, DEFAULT_T_MAX, PRESETS, FigurePreset
from .rwa import EigenMode, eigen_modes, propagate_rwa, rwa_matrix, rwa_trajectory_states
from .validation import run_validation

__version__ = "0.1.0"

__all__ = [
    "AnsatzBreakdown",
    "AnsatzDerivative",
    "AnsatzState",
    "CantionError",
    "DEFAULT_DT_OUT",
    "DEFAULT_T_MAX",
    "DegenerateModes",
    "EigenMode",
    "FigurePreset",
    "FockState",
    "IntegratorConfig",
    "LeakageExceeded",
    "ModelKind",
    "MomentRecord",
    "NormSingular",
    "PRESETS",
    "SimulationBreakdown",
    "StepSizeUnderflow",
    "SystemParams",
    "Trajectory",
    "TruncationTooSmall",
    "ZeroNorm",
    "apply_hamiltonian",
    "build_initial_fock",
    "dt_convergence_gap",
    "eigen_modes",
    "evolve_fock",
    "fock_expand",
    "fock_occupations",
    "full_rhs",
    "initial_ansatz",
    "integrate",
    "mean_occupations",
    "propagate_rwa",
    "run_validation",
    "rwa_matrix",
    "rwa_rhs",
    "rwa_trajectory_states",
    "series_norm_partial",
    "series_occupation_partial",
    "state_norm",
]
