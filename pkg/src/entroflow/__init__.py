"""Constrained maximum-entropy-production dynamics on exponential families.

The package provides:

- ``core``: model-agnostic exponential-family quantities (log partition,
  moments, Fisher information, entropies, multi-information, constraint
  gradient);
- ``models``: pairwise binary (exact enumeration), Curie-Weiss
  (magnetization sum), and a bivariate Gaussian oscillator (closed forms);
- ``dynamics``: the entropy-relaxation flow with the marginal-entropy-sum
  constraint, RK4 integration and drift repair;
- ``analysis``: flow Jacobians, symmetric/antisymmetric decomposition,
  degeneracy residuals, Jacobi-identity probes, coldness sweeps;
- ``experiments``: a config-driven CLI harness that writes CSV/JSON tables,
  figures and a verification report.
"""

__version__ = "0.1.0"

from .core import (
    DegenerateDirectionError,
    EntropyReport,
    ExpFamModel,
    InvalidParamsError,
    InvalidStateError,
    constraint_gradient,
    constraint_value,
    entropy_gradient,
    entropy_report,
    fisher_information,
    joint_entropy,
    log_partition,
    marginal_entropies,
    mean_parameters,
    multi_information,
    third_cumulant_contraction,
)
from .dynamics import (
    IntegrationError,
    ProjectionError,
    Trajectory,
    TrajectoryRecord,
    flow_field,
    integrate,
    lagrange_multiplier,
    project_to_constraint,
)
from .analysis import (
    FlatConstraintError,
    GenericDecomposition,
    JacobiReport,
    SweepResult,
    coldness_sweep,
    degeneracy_residuals,
    flow_jacobian,
    jacobi_violation,
    sa_decompose,
)
from .models import (
    CurieWeissModel,
    GaussianOscillatorModel,
    PairwiseBinaryModel,
    build_pairwise,
    cw_log_partition,
    cw_observables,
    cw_order_gradients,
    frustrated_theta,
    gauss_closed_forms,
)

__all__ = [
    "CurieWeissModel",
    "DegenerateDirectionError",
    "EntropyReport",
    "ExpFamModel",
    "FlatConstraintError",
    "GaussianOscillatorModel",
    "GenericDecomposition",
    "IntegrationError",
    "InvalidParamsError",
    "InvalidStateError",
    "JacobiReport",
    "PairwiseBinaryModel",
    "ProjectionError",
    "SweepResult",
    "Trajectory",
    "TrajectoryRecord",
    "build_pairwise",
    "coldness_sweep",
    "constraint_gradient",
    "constraint_value",
    "cw_log_partition",
    "cw_observables",
    "cw_order_gradients",
    "degeneracy_residuals",
    "entropy_gradient",
    "entropy_report",
    "fisher_information",
    "flow_field",
    "flow_jacobian",
    "frustrated_theta",
    "gauss_closed_forms",
    "integrate",
    "jacobi_violation",
    "joint_entropy",
    "lagrange_multiplier",
    "log_partition",
    "marginal_entropies",
    "mean_parameters",
    "multi_information",
    "project_to_constraint",
    "sa_decompose",
    "third_cumulant_contraction",
]
