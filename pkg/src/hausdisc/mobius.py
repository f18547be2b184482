"""Involutive disc automorphisms, the hyperbolic metric, and composition.

phi_w(z) = (w - z)/(1 - conj(w) z) swaps 0 and w and is its own inverse.
Composition f∘phi_w of a Taylor series with phi_w is performed by sampling
the composite on a circle and recovering coefficients, which converges
geometrically because the composite is analytic on the whole disc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .series import (
    RECOVERY_RADIUS,
    BoundarySamples,
    TaylorFunction,
    from_boundary_samples,
    next_pow2,
    reflect,
)

#: parameters with |w| above this are rejected at construction
MAX_PARAM_MODULUS = 1.0 - 1e-12
#: composition degree policy: max(deg f, DEGREE_BASE) + ceil(DEGREE_RATE/(1-|w|))
DEGREE_BASE = 64
DEGREE_RATE = 40.0
DEGREE_CAP = 2048


@dataclass(frozen=True)
class MobiusParam:
    """Point w strictly inside the disc, parametrizing phi_w."""

    w: complex

    def __post_init__(self):
        w = complex(self.w)
        if abs(w) > MAX_PARAM_MODULUS:
            raise DomainError(
                f"Moebius parameter must satisfy |w| <= 1 - 1e-12, got |w| = {abs(w):.17g}"
            )
        object.__setattr__(self, "w", w)

    @property
    def modulus(self) -> float:
        return abs(self.w)


def _param_value(w) -> complex:
    return w.w if isinstance(w, MobiusParam) else MobiusParam(w).w


def mobius_apply(w, z):
    """phi_w(z) = (w - z)/(1 - conj(w) z); maps the disc to itself."""
    wv = _param_value(w)
    a = np.abs(z)
    if np.any(a > 1.0 + 1e-12):
        raise DomainError("phi_w is evaluated on the closed disc only")
    z = np.asarray(z, dtype=complex)
    out = (wv - z) / (1.0 - np.conjugate(wv) * z)
    return out if out.shape else complex(out)


def one_minus_abs_sq(w, z):
    """1 - |phi_w(z)|^2 through the product identity.

    Evaluates (1-|w|^2)(1-|z|^2)/|1-conj(w) z|^2, never the direct
    subtraction, so the result stays positive and accurate near the boundary.
    """
    wv = _param_value(w)
    a = np.abs(z)
    if np.any(a >= 1.0):
        raise DomainError("identity requires |z| < 1")
    z = np.asarray(z, dtype=complex)
    aw = abs(wv)
    num = (1.0 - aw) * (1.0 + aw) * (1.0 - a) * (1.0 + a)
    den = np.abs(1.0 - np.conjugate(wv) * z) ** 2
    out = num / den
    return out if out.shape else float(out)


def bergman_distance(z: complex, w: complex) -> float:
    """Hyperbolic (Bergman) distance: atanh |phi_z(w)|.

    Nonnegative, symmetric, and invariant under every phi_a.
    """
    if abs(z) >= 1.0 or abs(w) >= 1.0:
        raise DomainError("Bergman distance requires both points inside the open disc")
    r = abs(mobius_apply(MobiusParam(z), w))
    return float(math.atanh(min(r, 1.0 - 1e-16)))


def composition_degree(deg: int, w_modulus: float) -> int:
    """Default output degree for f∘phi_w.

    Composite coefficients decay like |w|^k modulated by (1-|w|^2), so the
    budget grows like 1/(1-|w|); the cap keeps near-boundary parameters
    finite (their truncation is observable via the tail-band estimate).
    """
    return min(max(deg, DEGREE_BASE) + math.ceil(DEGREE_RATE / (1.0 - w_modulus)), DEGREE_CAP)


def compose(f: TaylorFunction, w, n: int | None = None,
            rho: float = RECOVERY_RADIUS, m: int | None = None) -> TaylorFunction:
    """Taylor coefficients of f∘phi_w, recovered from samples on |z| = rho.

    Parameters
    ----------
    f : TaylorFunction
    w : MobiusParam or complex with |w| < 1
    n : output truncation degree; default per composition_degree
    rho : sampling radius in (0, 1)
    m : sample count (power of two, > 2n); default scales with n

    The samples are f evaluated along the phi_w-image of the sampling circle;
    recovery inherits the noise-floor behavior of from_boundary_samples.
    phi_0 = -id is special-cased to an exact coefficient reflection.
    """
    wp = w if isinstance(w, MobiusParam) else MobiusParam(w)
    if n is None:
        n = composition_degree(f.degree, wp.modulus)
    if wp.w == 0:
        g = reflect(f)
        return g if n >= f.degree else TaylorFunction(g.coeffs[: n + 1])
    if not 0.0 < rho < 1.0:
        raise DomainError(f"sampling radius must lie in (0, 1), got {rho}")
    if m is None:
        m = next_pow2(max(4096, 2 * (n + 1)))
    if n >= m // 2:
        raise ValueError(f"composition degree needs n < M/2 (n={n}, M={m})")
    circle = rho * np.exp(2j * np.pi * np.arange(m) / m)
    values = f(mobius_apply(wp, circle))
    return from_boundary_samples(BoundarySamples(rho, values), n)
