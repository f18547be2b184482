"""Norms of the three classical spaces on the disc.

Bloch: sup of (1-|z|^2)|f'(z)| over a polar grid graded toward the boundary,
with one local refinement pass around the running argmax.  Weighted Bergman:
p-mean against an Area(alpha) quadrature rule.  Hardy: sup of normalized
circle means (1/2pi) int |f|^p dtheta over a dyadic radius ladder; the means
are nondecreasing in the radius for analytic f, which is asserted as a
self-check, and for coefficient vectors (polynomials) the sup is attained at
the boundary circle itself, which closes the ladder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measure import MeasureSpec, QuadratureRule, build_quadrature
from .series import TaylorFunction, circle_values, circle_values_batch, derivative

#: Bloch grid defaults: radii graded toward the boundary, equispaced angles
BLOCH_RADII = 200
BLOCH_ANGLES = 256
#: Hardy ladder: radii 1 - 2^-j for j = 1..HARDY_LEVELS, then the boundary circle
HARDY_LEVELS = 12
HARDY_SAMPLES = 4096


@dataclass(frozen=True)
class SpaceSpec:
    """Which norm: Bloch, Bergman(p >= 1, alpha > -1), or Hardy(p > 0)."""

    kind: str
    p: float = 0.0
    alpha: float = 0.0

    @classmethod
    def bloch(cls) -> "SpaceSpec":
        return cls("bloch")

    @classmethod
    def bergman(cls, p: float, alpha: float = 0.0) -> "SpaceSpec":
        if p < 1.0:
            raise ValueError(f"Bergman norm requires p >= 1, got {p}")
        if alpha <= -1.0:
            raise ValueError(f"Bergman weight requires alpha > -1, got {alpha}")
        return cls("bergman", float(p), float(alpha))

    @classmethod
    def hardy(cls, p: float) -> "SpaceSpec":
        if p <= 0.0:
            raise ValueError(f"Hardy norm requires p > 0, got {p}")
        return cls("hardy", float(p))

    def describe(self) -> str:
        if self.kind == "bloch":
            return "bloch"
        if self.kind == "bergman":
            return f"bergman(p={self.p:g}, alpha={self.alpha:g})"
        return f"hardy(p={self.p:g})"


def _bloch_grid_radii(n: int) -> np.ndarray:
    # the origin plus radii graded toward the boundary
    u = (np.arange(n - 1) + 0.5) / (n - 1)
    return np.concatenate([[0.0], 1.0 - (1.0 - u) ** 2])


def bloch_seminorm(f: TaylorFunction, n_radial: int = BLOCH_RADII,
                   n_angular: int = BLOCH_ANGLES, refine: bool = True) -> float:
    """Grid supremum of (1-|z|^2)|f'(z)|.

    For polynomials the supremum is attained strictly inside the disc; the
    grid error is quadratic in the spacing and a single refinement pass
    around the coarse argmax tightens it well below the test tolerances.
    """
    df = derivative(f)
    if not np.any(df.coeffs):
        return 0.0
    radii = _bloch_grid_radii(n_radial)
    vals = np.abs(circle_values_batch(df.coeffs, radii, n_angular))
    weighted = (1.0 - radii**2)[:, None] * vals
    best = float(weighted.max())
    if refine:
        i = int(np.unravel_index(np.argmax(weighted), weighted.shape)[0])
        lo = radii[max(i - 1, 0)]
        hi = min(radii[min(i + 1, n_radial - 1)], 1.0 - 1e-9)
        fine_r = np.linspace(lo, hi, 33)
        fine = np.abs(circle_values_batch(df.coeffs, fine_r, 4 * n_angular))
        best = max(best, float(((1.0 - fine_r**2)[:, None] * fine).max()))
    return best


def bloch_norm(f: TaylorFunction, **kwargs) -> float:
    """Seminorm plus |f(0)|, the Banach-space norm."""
    return bloch_seminorm(f, **kwargs) + float(abs(f.coeffs[0]))


def bergman_norm(f: TaylorFunction, p: float, alpha: float,
                 rule: QuadratureRule) -> float:
    """(integral |f|^p dA_alpha)^(1/p) against a matching Area(alpha) rule."""
    if p < 1.0:
        raise ValueError(f"Bergman norm requires p >= 1, got {p}")
    m = rule.measure
    if m.is_discrete or m.alpha != alpha:
        raise ValueError(
            f"rule measure mismatch: expected Area({alpha:g}), got "
            f"{'discrete' if m.is_discrete else f'Area({m.alpha:g})'}"
        )
    if rule.is_tensor:
        vals = np.abs(circle_values_batch(f.coeffs, rule.radii, rule.n_theta))
        means = (vals**p).mean(axis=1)
        total = float(np.sum(rule.radial_weights * means))
    else:
        total = float(np.sum(np.abs(f(rule.nodes)) ** p * rule.weights))
    return total ** (1.0 / p)


def hardy_norm(f: TaylorFunction, p: float, m: int = HARDY_SAMPLES,
               levels: int = HARDY_LEVELS) -> float:
    """sup_r of the normalized circle p-means, on the dyadic ladder plus r=1.

    The monotonicity of the means in r is asserted (up to roundoff slack);
    the returned value is the boundary-circle mean.
    """
    if p <= 0.0:
        raise ValueError(f"Hardy norm requires p > 0, got {p}")
    radii = np.concatenate([1.0 - 0.5 ** np.arange(1, levels + 1), [1.0]])
    vals = np.abs(circle_values_batch(f.coeffs, radii, m))
    means = (vals**p).mean(axis=1)
    slack = 1e-12 * (1.0 + means.max())
    if np.any(np.diff(means) < -slack):
        j = int(np.argmax(np.diff(means) < -slack))
        raise AssertionError(
            f"Hardy circle means failed monotonicity between radii "
            f"{radii[j]:.9g} and {radii[j+1]:.9g}"
        )
    return float(means[-1] ** (1.0 / p))


def norm_in_space(f: TaylorFunction, space: SpaceSpec,
                  bergman_rule: QuadratureRule | None = None) -> float:
    """Dispatch to the norm named by a SpaceSpec."""
    if space.kind == "bloch":
        return bloch_norm(f)
    if space.kind == "bergman":
        if bergman_rule is None:
            bergman_rule = build_quadrature(MeasureSpec.area(space.alpha), level=2)
        return bergman_norm(f, space.p, space.alpha, bergman_rule)
    return hardy_norm(f, space.p)


def boundary_mean(f: TaylorFunction, p: float, radius: float = 1.0,
                  m: int = HARDY_SAMPLES) -> float:
    """Single normalized circle mean (1/2pi) int |f(radius e^it)|^p dt."""
    vals = np.abs(circle_values(f.coeffs, radius, m))
    return float((vals**p).mean())
