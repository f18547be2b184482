"""Kernel-averaged Moebius composition operators on the unit disc.

Taylor-series representations of analytic functions, the involutive disc
automorphisms, disc measures and quadrature, Bloch/Bergman/Hardy norms,
the averaging operators built from a kernel-measure pair, and a harness
checking the operators against their explicit norm bounds.
"""

from .errors import ConfigError, DivergenceError, DomainError
from .hausdorff import (
    CoefficientSequence,
    ComposeParams,
    HausdorffOperator,
    apply_discrete,
    coefficient_sequence,
    linear_coefficient_sequence,
    tail_mass,
)
from .measure import (
    KernelSpec,
    MeasureSpec,
    QuadratureRule,
    build_quadrature,
    integrability_diagnostic,
    integrate,
)
from .mobius import MobiusParam, bergman_distance, compose, mobius_apply, one_minus_abs_sq
from .norms import SpaceSpec, bergman_norm, bloch_norm, bloch_seminorm, hardy_norm, \
    norm_in_space
from .series import (
    BoundarySamples,
    TaylorFunction,
    boundary_samples,
    constant,
    derivative,
    evaluate,
    from_boundary_samples,
    geometric,
    monomial,
    reflect,
    tail_band_magnitude,
)
from .verify import (
    BoundReport,
    SweepReport,
    approx_identity_sweep,
    bergman_bound,
    bloch_bound,
    change_of_variables_check,
    check_bound,
    composition_inequality_check,
    default_bound_configs,
    empirical_opnorm,
    hardy_bound,
    make_operator,
    mobius_invariance_check,
    theoretical_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BoundarySamples",
    "CoefficientSequence",
    "ComposeParams",
    "ConfigError",
    "DivergenceError",
    "DomainError",
    "HausdorffOperator",
    "KernelSpec",
    "MeasureSpec",
    "MobiusParam",
    "QuadratureRule",
    "SpaceSpec",
    "SweepReport",
    "TaylorFunction",
    "apply_discrete",
    "approx_identity_sweep",
    "bergman_bound",
    "bergman_distance",
    "bergman_norm",
    "bloch_bound",
    "bloch_norm",
    "bloch_seminorm",
    "boundary_samples",
    "build_quadrature",
    "change_of_variables_check",
    "check_bound",
    "coefficient_sequence",
    "compose",
    "composition_inequality_check",
    "constant",
    "default_bound_configs",
    "derivative",
    "empirical_opnorm",
    "evaluate",
    "from_boundary_samples",
    "geometric",
    "hardy_bound",
    "hardy_norm",
    "integrability_diagnostic",
    "integrate",
    "linear_coefficient_sequence",
    "make_operator",
    "mobius_apply",
    "mobius_invariance_check",
    "monomial",
    "norm_in_space",
    "one_minus_abs_sq",
    "reflect",
    "tail_band_magnitude",
    "tail_mass",
    "theoretical_bound",
]
