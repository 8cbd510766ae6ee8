"""Quantum state fidelities built on the matrix geometric mean.

The package computes the Uhlmann, Holevo and Matsumoto fidelities, the
matrix geometric mean of PSD matrices, solves the two fidelity SDPs with a
dedicated interior-point method, and evaluates the invariant geometry of
the positive-definite cone.
"""

from ._kernels import BACKEND
from .errors import (
    ConvergenceError,
    GeofidError,
    InvalidStateError,
    NotHermitianError,
    SingularInputError,
    SolverError,
)
from .fidelity import (
    FidelityReport,
    Povm,
    alberti_objective,
    classical_fidelity,
    fidelity_report,
    holevo_fidelity,
    matsumoto_fidelity,
    matsumoto_via_rotation,
    optimal_povm,
    pure_mixed_fidelities,
    pure_state_fidelities,
    trace_distance,
    uhlmann_fidelity,
    uhlmann_gradient,
)
from .geomean import RegularizationSchedule, geometric_mean, geometric_mean_limit, maximality_witness
from .geometry import (
    QubitCoords,
    alpha_q,
    coords_from_qubit,
    fgm_asymptotic,
    geodesic_point,
    hyperbolic_geodesic_r,
    metric_inner,
    midpoint_radius,
    qubit_from_coords,
    spd_distance,
)
from .sdp import FidelitySdp, SdpSolution, SolverOptions, solve, verify_solution

__version__ = "0.1.0"

__all__ = [
    "alberti_objective",
    "alpha_q",
    "BACKEND",
    "classical_fidelity",
    "ConvergenceError",
    "coords_from_qubit",
    "fgm_asymptotic",
    "fidelity_report",
    "FidelityReport",
    "FidelitySdp",
    "geodesic_point",
    "GeofidError",
    "geometric_mean",
    "geometric_mean_limit",
    "holevo_fidelity",
    "hyperbolic_geodesic_r",
    "InvalidStateError",
    "matsumoto_fidelity",
    "matsumoto_via_rotation",
    "maximality_witness",
    "metric_inner",
    "midpoint_radius",
    "NotHermitianError",
    "optimal_povm",
    "Povm",
    "pure_mixed_fidelities",
    "pure_state_fidelities",
    "qubit_from_coords",
    "QubitCoords",
    "RegularizationSchedule",
    "SdpSolution",
    "SingularInputError",
    "solve",
    "SolverError",
    "SolverOptions",
    "spd_distance",
    "trace_distance",
    "uhlmann_fidelity",
    "uhlmann_gradient",
    "verify_solution",
]
