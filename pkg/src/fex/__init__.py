"""Certified extension of functions on finite point sets to Fourier transforms.

Given a finite abelian group and an n-point subset K, this package builds
linear operators that extend functions on K to absolutely convergent
Fourier series on the whole group, certifies two-sided intervals for
their operator norms, searches for operators of smaller norm, and checks
the inequality chain that pins the best achievable norm between
sqrt(n/2) and sqrt(n).
"""

from .alpha import (
    AlphaReport,
    optimize_alpha,
    project_constraints,
    random_feasible_operator,
    theorem_bounds,
)
from .certificates import (
    ChainReport,
    KhinchinReport,
    chain_check,
    khinchin_average,
    khinchin_check,
)
from .errors import (
    BudgetError,
    ConfigError,
    FexError,
    GroupError,
    PeakError,
    ResolutionError,
    SideMismatchError,
)
from .groups import (
    Group,
    PointSet,
    add,
    difference_set,
    make_group,
    make_point_set,
    neg,
    pairing,
    sample_point_set,
    sub,
)
from .operators import (
    ExtensionOperator,
    NormCertificate,
    apply,
    canonical_operator,
    from_generators,
    generator_norms,
    interpolation_defect,
    norm_certified,
    rademacher_average,
    sign_max,
)
from .peaks import Peak, PeakValidation, build_peak, greedy_base_set, validate_peak
from .spectral import (
    FREQUENCY,
    TIME,
    GroupFunction,
    a_norm,
    analyze,
    frequency_function,
    l1_time_norm,
    sup_norm,
    synthesize,
    time_function,
)

__all__ = [
    "AlphaReport",
    "BudgetError",
    "ChainReport",
    "ConfigError",
    "ExtensionOperator",
    "FREQUENCY",
    "FexError",
    "Group",
    "GroupError",
    "GroupFunction",
    "KhinchinReport",
    "NormCertificate",
    "Peak",
    "PeakError",
    "PeakValidation",
    "PointSet",
    "ResolutionError",
    "SideMismatchError",
    "TIME",
    "a_norm",
    "add",
    "analyze",
    "apply",
    "build_peak",
    "canonical_operator",
    "chain_check",
    "difference_set",
    "frequency_function",
    "from_generators",
    "generator_norms",
    "greedy_base_set",
    "interpolation_defect",
    "khinchin_average",
    "khinchin_check",
    "l1_time_norm",
    "make_group",
    "make_point_set",
    "neg",
    "norm_certified",
    "optimize_alpha",
    "pairing",
    "project_constraints",
    "rademacher_average",
    "random_feasible_operator",
    "sample_point_set",
    "sign_max",
    "sub",
    "sup_norm",
    "synthesize",
    "theorem_bounds",
    "time_function",
    "validate_peak",
]

__version__ = "0.1.0"
