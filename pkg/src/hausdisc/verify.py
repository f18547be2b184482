"""Bound calculators, empirical operator norms, and identity-approximation sweeps.

The bound integrals are the three operator-norm upper bounds:

  Bloch:    int |K(w)| (2 + (1/2) log((1+|w|)/(1-|w|))) d(mu)
  Bergman:  int |K(w)| ((1+|w|)/(1-|w|))^((2+alpha)/p) d(mu)
  Hardy:    int |K(w)| ((1+|w|)/(1-|w|))^(1/p) d(mu)

Empirical operator norms are lower bounds obtained from seeded random test
polynomials; the harness certifies consistency (empirical below the bound),
never sharpness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError
from .hausdorff import HausdorffOperator
from .measure import KernelSpec, MeasureSpec, QuadratureRule, build_quadrature, \
    integrate, integrability_diagnostic
from .mobius import MobiusParam, compose, mobius_apply
from .norms import SpaceSpec, bergman_norm, bloch_norm, bloch_seminorm, hardy_norm, \
    norm_in_space
from .series import TaylorFunction

#: relative slack for bound comparisons (quadrature + grid-sup error)
BOUND_TOL = 1e-2
#: relative slack for isometry/inequality checks
ISOMETRY_TOL = 1e-3
#: relative slack for pure-quadrature identities
QUADRATURE_TOL = 1e-6
#: default shrink factors for identity-approximation sweeps
DEFAULT_EPSILONS = (0.3, 0.1, 0.03, 0.01, 0.003, 0.001)


@dataclass(frozen=True)
class BoundReport:
    space: SpaceSpec
    theoretical: float
    empirical: float
    ratio: float
    passed: bool
    trials: int
    seed: int


@dataclass(frozen=True)
class SweepReport:
    epsilons: tuple
    errors: tuple
    uniform_bound: float
    uniform_pass: bool
    max_ratio: float


def _abs_kernel(kernel: KernelSpec):
    return lambda w: np.abs(kernel(w))


def _require(kernel: KernelSpec, weight, measure: MeasureSpec, what: str):
    diag = integrability_diagnostic(_abs_kernel(kernel), weight, measure)
    if not diag["converged"]:
        raise DivergenceError(
            f"{what}: integrability diagnostic failed "
            f"(estimate {diag['estimate']:.6g} not stabilizing)"
        )


def bloch_bound(kernel: KernelSpec, rule: QuadratureRule) -> float:
    """The Bloch operator-norm bound integral over the rule's measure."""
    _require(kernel, 1.0, rule.measure, "Bloch bound, weight 1")
    _require(kernel, lambda w: np.log(1.0 / (1.0 - np.abs(w))), rule.measure,
             "Bloch bound, logarithmic weight")
    extra = lambda w: 2.0 + 0.5 * np.log((1.0 + np.abs(w)) / (1.0 - np.abs(w)))
    return float(np.real(integrate(_abs_kernel(kernel), rule, extra)))


def bergman_bound(kernel: KernelSpec, p: float, alpha: float,
                  rule: QuadratureRule) -> float:
    """The weighted-Bergman bound integral; stated against plain area measure.

    The rule must realize Area(0); discrete rules are rejected here (use
    check_bound, which extends the underlying composition inequality to the
    operator's own measure).
    """
    if p < 1.0:
        raise ValueError(f"Bergman bound requires p >= 1, got {p}")
    if alpha <= -1.0:
        raise ValueError(f"Bergman bound requires alpha > -1, got {alpha}")
    m = rule.measure
    if m.is_discrete or m.alpha != 0.0:
        raise ValueError("Bergman bound integral is stated for the plain area measure")
    return _bergman_bound_any_measure(kernel, p, alpha, rule)


def _bergman_bound_any_measure(kernel: KernelSpec, p: float, alpha: float,
                               rule: QuadratureRule) -> float:
    s = (2.0 + alpha) / p
    _require(kernel, lambda w: (1.0 - np.abs(w)) ** -s, rule.measure,
             f"Bergman bound, weight (1-|w|)^-{s:g}")
    extra = lambda w: ((1.0 + np.abs(w)) / (1.0 - np.abs(w))) ** s
    return float(np.real(integrate(_abs_kernel(kernel), rule, extra)))


def hardy_bound(kernel: KernelSpec, rule: QuadratureRule, p: float) -> float:
    """The Hardy operator-norm bound integral over the rule's measure."""
    if p < 1.0:
        raise ValueError(f"Hardy bound requires p >= 1, got {p}")
    _require(kernel, lambda w: (1.0 - np.abs(w)) ** (-1.0 / p), rule.measure,
             f"Hardy bound, weight (1-|w|)^-1/{p:g}")
    extra = lambda w: ((1.0 + np.abs(w)) / (1.0 - np.abs(w))) ** (1.0 / p)
    return float(np.real(integrate(_abs_kernel(kernel), rule, extra)))


def random_test_function(rng: np.random.Generator, max_degree: int = 32) -> TaylorFunction:
    """Random polynomial: uniform degree, complex Gaussian coefficients scaled 1/(k+1)."""
    deg = int(rng.integers(0, max_degree + 1))
    k = np.arange(deg + 1)
    coeffs = (rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)) / (k + 1)
    return TaylorFunction(coeffs)


def empirical_opnorm(H: HausdorffOperator, space: SpaceSpec, trials: int,
                     seed: int, max_degree: int = 32,
                     bergman_rule: QuadratureRule | None = None) -> float:
    """Max of norm(H f)/norm(f) over seeded random test polynomials.

    A lower bound on the operator norm; deterministic given the seed.
    """
    if trials < 1:
        raise ValueError("at least one trial is required")
    if space.kind == "bergman" and bergman_rule is None:
        bergman_rule = build_quadrature(MeasureSpec.area(space.alpha), level=2)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = random_test_function(rng, max_degree)
        hf = H.apply(f)
        num = norm_in_space(hf, space, bergman_rule)
        den = norm_in_space(f, space, bergman_rule)
        if den > 0.0:
            worst = max(worst, num / den)
    return worst


def theoretical_bound(H: HausdorffOperator, space: SpaceSpec) -> float:
    """Bound integral matching the space, over the operator's own measure."""
    if space.kind == "bloch":
        return bloch_bound(H.kernel, H.rule)
    if space.kind == "bergman":
        return _bergman_bound_any_measure(H.kernel, space.p, space.alpha, H.rule)
    return hardy_bound(H.kernel, H.rule, space.p)


def check_bound(H: HausdorffOperator, space: SpaceSpec, trials: int = 200,
                seed: int = 1) -> BoundReport:
    """Empirical norm against the theoretical bound, with the 1% slack."""
    theo = theoretical_bound(H, space)
    emp = empirical_opnorm(H, space, trials, seed)
    ratio = emp / theo if theo > 0 else np.inf
    return BoundReport(space, theo, emp, ratio,
                       emp <= theo * (1.0 + BOUND_TOL), trials, seed)


def composition_inequality_check(f: TaylorFunction, w, space: SpaceSpec,
                                 bergman_rule: QuadratureRule | None = None) -> dict:
    """p-th power norm of f∘phi_w against the composition growth factor."""
    wp = w if isinstance(w, MobiusParam) else MobiusParam(w)
    aw = wp.modulus
    if space.kind == "bergman":
        factor = ((1.0 + aw) / (1.0 - aw)) ** (2.0 + space.alpha)
        if bergman_rule is None:
            bergman_rule = build_quadrature(MeasureSpec.area(space.alpha), level=2)
        lhs = bergman_norm(compose(f, wp), space.p, space.alpha, bergman_rule) ** space.p
        rhs = factor * bergman_norm(f, space.p, space.alpha, bergman_rule) ** space.p
    elif space.kind == "hardy":
        factor = (1.0 + aw) / (1.0 - aw)
        lhs = hardy_norm(compose(f, wp), space.p) ** space.p
        rhs = factor * hardy_norm(f, space.p) ** space.p
    else:
        raise ValueError("composition inequality applies to Bergman and Hardy spaces")
    return {"lhs": lhs, "rhs": rhs, "pass": lhs <= rhs * (1.0 + ISOMETRY_TOL)}


def change_of_variables_check(f: TaylorFunction, w, p: float, alpha: float,
                              level: int = 3) -> dict:
    """Both sides of the Moebius change-of-variables identity for |f|^p dA_alpha.

    Left: integral of |f∘phi_w|^p dA_alpha.  Right: integral of |f|^p times
    (1-|w|^2)^(2+alpha)/|1 - conj(w) z|^(2(2+alpha)) dA_alpha.  Both sides
    by the same quadrature rule; they agree to quadrature accuracy.
    """
    wp = w if isinstance(w, MobiusParam) else MobiusParam(w)
    if wp.modulus > 0.8:
        raise ValueError("identity check requires |w| <= 0.8")
    rule = build_quadrature(MeasureSpec.area(alpha), level=level)
    z = rule.nodes
    lhs = float(np.sum(np.abs(f(mobius_apply(wp, z))) ** p * rule.weights))
    density = (1.0 - wp.modulus**2) ** (2.0 + alpha) / \
        np.abs(1.0 - np.conjugate(wp.w) * z) ** (2.0 * (2.0 + alpha))
    rhs = float(np.sum(np.abs(f(z)) ** p * density * rule.weights))
    scale = max(abs(rhs), 1e-300)
    return {"lhs": lhs, "rhs": rhs, "pass": abs(lhs - rhs) / scale <= QUADRATURE_TOL}


def mobius_invariance_check(f: TaylorFunction, w) -> dict:
    """Bloch seminorms of f and f∘phi_w; equal up to grid-sup error."""
    wp = w if isinstance(w, MobiusParam) else MobiusParam(w)
    lhs = bloch_seminorm(f)
    rhs = bloch_seminorm(compose(f, wp))
    return {"lhs": lhs, "rhs": rhs,
            "pass": abs(lhs - rhs) <= ISOMETRY_TOL * (1.0 + lhs)}


def approx_identity_sweep(H: HausdorffOperator, f: TaylorFunction,
                          space: SpaceSpec, epsilons=None,
                          bergman_rule: QuadratureRule | None = None) -> SweepReport:
    """Errors norm(H_eps f - f) over a shrink ladder, plus the uniform bound.

    Requires a unit-mass kernel.  The uniform bound is
    2^(2(2+alpha)/p) * int|K|d(mu) for Bergman (valid for eps < 1/2) and
    2^(1/p) * int|K|d(mu) for Hardy (valid for eps < 1/3); measured ratios
    norm(H_eps f)/norm(f) are checked against it on the applicable part of
    the ladder.  The proofs display the Hardy composite norm as an equality
    while the underlying computation gives an inequality; max_ratio records
    the measured value so the question stays observable.
    """
    if space.kind == "bloch" or space.p < 1.0:
        raise ValueError("identity approximation applies to Bergman/Hardy with p >= 1")
    mass = H.kernel_mass()
    if abs(mass - 1.0) > 1e-10:
        raise ValueError(f"kernel is not normalized (mass {mass:.6g}); "
                         "call normalized() first")
    if space.kind == "bergman" and bergman_rule is None:
        bergman_rule = build_quadrature(MeasureSpec.area(space.alpha), level=2)
    epsilons = tuple(DEFAULT_EPSILONS if epsilons is None else epsilons)
    abs_mass = float(np.real(integrate(_abs_kernel(H.kernel), H.rule)))
    if space.kind == "bergman":
        uniform_bound = 2.0 ** (2.0 * (2.0 + space.alpha) / space.p) * abs_mass
        eps_limit = 0.5
    else:
        uniform_bound = 2.0 ** (1.0 / space.p) * abs_mass
        eps_limit = 1.0 / 3.0
    fnorm = norm_in_space(f, space, bergman_rule)
    errors = []
    max_ratio = 0.0
    uniform_pass = True
    for eps in epsilons:
        hf = H.apply_epsilon(eps, f)
        errors.append(norm_in_space(hf - f, space, bergman_rule))
        if eps < eps_limit and fnorm > 0.0:
            ratio = norm_in_space(hf, space, bergman_rule) / fnorm
            max_ratio = max(max_ratio, ratio)
            if ratio > uniform_bound * (1.0 + BOUND_TOL):
                uniform_pass = False
    return SweepReport(epsilons, tuple(errors), uniform_bound, uniform_pass, max_ratio)


def default_bound_configs() -> list:
    """Twelve (space, kernel, measure) bound configurations.

    Spans Bloch, Bergman p in {1,2,4} x alpha in {0,1}, Hardy p in {1,2,4},
    over discrete atoms and Area(0) with constant and (1-|w|)^2 kernels,
    restricted to combinations whose bound integral converges (Bergman over
    area needs (2+alpha)/p < 1, Hardy over area needs p > 1).
    """
    atom_half = MeasureSpec.discrete([0.5], [1.0])
    atom_pair = MeasureSpec.discrete([0.5, -0.25j], [1.0, 0.5])
    atom_off = MeasureSpec.discrete([0.3 + 0.2j], [1.0])
    area = MeasureSpec.area(0.0)
    k1 = KernelSpec.constant(1.0)
    k_pow2 = KernelSpec.radial_power(2.0)
    return [
        (SpaceSpec.bloch(), k1, atom_half),
        (SpaceSpec.bloch(), k1, area),
        (SpaceSpec.bergman(1.0, 0.0), k1, atom_half),
        (SpaceSpec.bergman(2.0, 1.0), k1, atom_off),
        (SpaceSpec.bergman(2.0, 0.0), k1, atom_pair),
        (SpaceSpec.bergman(4.0, 0.0), k1, area),
        (SpaceSpec.bergman(4.0, 1.0), k_pow2, area),
        (SpaceSpec.hardy(1.0), k1, atom_half),
        (SpaceSpec.hardy(2.0), k1, atom_half),
        (SpaceSpec.hardy(2.0), k1, area),
        (SpaceSpec.hardy(4.0), k_pow2, area),
        (SpaceSpec.hardy(4.0), k1, atom_off),
    ]


def make_operator(kernel: KernelSpec, measure: MeasureSpec, level: int = 1,
                  gamma: float | None = None) -> HausdorffOperator:
    """Operator with a freshly built rule (gamma defaults to the graded mesh)."""
    kwargs = {} if gamma is None else {"gamma": gamma}
    rule = build_quadrature(measure, level=level, **kwargs)
    return HausdorffOperator(kernel, measure, rule)
