"""Quantum Fisher information under Haar-random measurement bases.

Computes the quantum geometric tensor and QFIM of parameterized pure
states, the classical Fisher information matrix under arbitrary and
Haar-random measurement bases, and runs reproducible Monte Carlo
experiments verifying that the Haar-averaged CFIM equals half the QFIM,
its entrywise variance formula, and the concentration of the random
CFIM around its mean.
"""

from .ansatz import (
    ProductExponentialAnsatz,
    StateWithJacobian,
    build_ansatz,
    evaluate,
    jacobian_fd,
    resolve_theta,
    seeded_uniform_theta,
)
from .errors import (
    DegenerateFamilyError,
    DimensionMismatchError,
    KernelLeakageError,
    NonHermitianError,
)
from .fisher import (
    Cfim,
    Qgt,
    average_outcome_projections,
    cfim_probability_form,
    cfim_projection_form,
    measurement_probabilities,
    qfim_realified,
    qgt,
    variance_predictor,
)
from .haar import (
    SeededStream,
    first_entry_moments,
    mix_seed,
    sample_haar_batch,
    sample_haar_unitary,
    substream,
)
from .linalg import hermitian_eig, hermitian_expm, project_onto_span
from .montecarlo import (
    EstimationReport,
    SandwichResult,
    empirical_variance,
    error_metrics,
    estimate_qfim,
    sandwich_check,
)
from .realrep import (
    apply_j,
    realify_matrix,
    realify_vector,
    selector_matrix,
    symplectic_j,
)
from .tails import (
    BoundReport,
    TailFit,
    bound_violation_report,
    empirical_ccdf,
    fit_tail_constant,
    frobenius_error_bound,
    histogram,
    max_entry_error_bound,
    sample_rel_errors,
    sandwich_success_bound,
    sweep_scaled_error,
    tail_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Cfim",
    "DegenerateFamilyError",
    "DimensionMismatchError",
    "EstimationReport",
    "KernelLeakageError",
    "NonHermitianError",
    "ProductExponentialAnsatz",
    "Qgt",
    "SandwichResult",
    "SeededStream",
    "StateWithJacobian",
    "TailFit",
    "apply_j",
    "average_outcome_projections",
    "bound_violation_report",
    "build_ansatz",
    "cfim_probability_form",
    "cfim_projection_form",
    "empirical_ccdf",
    "empirical_variance",
    "error_metrics",
    "estimate_qfim",
    "evaluate",
    "first_entry_moments",
    "fit_tail_constant",
    "frobenius_error_bound",
    "hermitian_eig",
    "hermitian_expm",
    "histogram",
    "jacobian_fd",
    "max_entry_error_bound",
    "measurement_probabilities",
    "mix_seed",
    "project_onto_span",
    "qfim_realified",
    "qgt",
    "realify_matrix",
    "realify_vector",
    "resolve_theta",
    "sample_haar_batch",
    "sample_haar_unitary",
    "sample_rel_errors",
    "sandwich_check",
    "sandwich_success_bound",
    "seeded_uniform_theta",
    "selector_matrix",
    "substream",
    "sweep_scaled_error",
    "symplectic_j",
    "tail_experiment",
    "variance_predictor",
]
