"""Eigenvalue enclosures for elastic wave operators with complex potentials.

The package discretizes -Delta* + V on a periodic lattice, splits resolvents
through the Helmholtz decomposition, and tests eigenvalue bounds of the form
|z|^gamma <= C * (norm of V)^power for several norm families.
"""

from .lattice import (
    Lattice,
    ScalarField,
    VectorField,
    apply_multiplier,
    forward_transform,
    inverse_transform,
    l2_inner,
    random_scalar_field,
    random_vector_field,
    scalar_lp_norm,
    vector_lp_norm,
)
from .helmholtz import (
    HelmholtzPair,
    divergence,
    gradient,
    helmholtz_decompose,
    leray_project,
    riesz_norm_bound,
    riesz_transform,
    splitting_lp_bound,
)
from .lame import (
    LameParams,
    Potential,
    apply_lame,
    apply_perturbed,
    lame_symbol,
    resolvent_direct,
    resolvent_split,
)
from .norms import (
    NormResult,
    kerman_sayer_norm,
    lp_norm,
    morrey_campanato_norm,
    muckenhoupt_constant,
    norm_result,
    polynomial_weight,
    weighted_lq_norm,
)
from .spectra import (
    BSOperator,
    BudgetExceeded,
    SpectralResult,
    bs_check,
    bs_norm,
    dense_operator_matrix,
    discrete_eigenvalues,
    resolvent_norm_estimate,
    shift_invert_eigenvalues,
)
from .enclosure import (
    BoundSpec,
    CalibrationResult,
    EmptyEnsemble,
    EnclosureReport,
    HypothesisViolation,
    ScalingReport,
    bound_1d_radius,
    bound_rhs,
    calibrate_constant,
    default_gamma_grid,
    default_mc_p,
    enclosure_report,
    scaling_exponent_test,
)
from .operator_norms import ConvergenceError, lp_operator_norm, singular_norm
from .potentials import gaussian_bump, inverse_power, random_ensemble, square_well

__version__ = "0.1.0"

__all__ = [
    "Lattice",
    "ScalarField",
    "VectorField",
    "apply_multiplier",
    "forward_transform",
    "inverse_transform",
    "l2_inner",
    "random_scalar_field",
    "random_vector_field",
    "scalar_lp_norm",
    "vector_lp_norm",
    "HelmholtzPair",
    "divergence",
    "gradient",
    "helmholtz_decompose",
    "leray_project",
    "riesz_norm_bound",
    "riesz_transform",
    "splitting_lp_bound",
    "LameParams",
    "Potential",
    "apply_lame",
    "apply_perturbed",
    "lame_symbol",
    "resolvent_direct",
    "resolvent_split",
    "NormResult",
    "kerman_sayer_norm",
    "lp_norm",
    "morrey_campanato_norm",
    "muckenhoupt_constant",
    "norm_result",
    "polynomial_weight",
    "weighted_lq_norm",
    "BSOperator",
    "BudgetExceeded",
    "SpectralResult",
    "bs_check",
    "bs_norm",
    "dense_operator_matrix",
    "discrete_eigenvalues",
    "resolvent_norm_estimate",
    "shift_invert_eigenvalues",
    "BoundSpec",
    "CalibrationResult",
    "EmptyEnsemble",
    "EnclosureReport",
    "HypothesisViolation",
    "ScalingReport",
    "bound_1d_radius",
    "bound_rhs",
    "calibrate_constant",
    "default_gamma_grid",
    "default_mc_p",
    "enclosure_report",
    "scaling_exponent_test",
    "ConvergenceError",
    "lp_operator_norm",
    "singular_norm",
    "gaussian_bump",
    "inverse_power",
    "random_ensemble",
    "square_well",
]
