"""Truncated Taylor series on the unit disc.

A function analytic on the disc is represented by its Taylor coefficients
c_0..c_N at the origin.  Everything downstream (Moebius composition, norms,
operator application) is built on two primitives implemented here:

* evaluation of a coefficient vector on a centered circle |z| = rho through
  coefficient folding plus a single FFT (exact up to rounding for any
  polynomial, since exp(2*pi*i*j*k/M) only depends on k mod M), and
* recovery of coefficients from circle samples, the inverse FFT direction,
  with the rho**-k unscaling that limits how deep a recovery can reach.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

from .errors import DomainError

#: default degree for truncations of non-polynomial function families
DEFAULT_DEGREE = 256
#: default circle radius for coefficient recovery
RECOVERY_RADIUS = 0.9
#: default number of circle samples for coefficient recovery
RECOVERY_SAMPLES = 4096
#: multiplier on machine epsilon for the recovery noise floor
NOISE_FLOOR_FACTOR = 256.0

_EPS = np.finfo(float).eps


def fft_workers() -> int:
    """Worker cap for FFT calls, from the HAUSDORFF_THREADS environment variable."""
    try:
        return max(1, int(os.environ.get("HAUSDORFF_THREADS", "1")))
    except ValueError:
        return 1


def next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m <<= 1
    return m


def _as_coeffs(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a non-empty 1-D sequence")
    return c


@dataclass(frozen=True, eq=False)
class TaylorFunction:
    """f(z) = sum_k coeffs[k] * z**k, analytic on the whole disc."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = _as_coeffs(self.coeffs)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other: "TaylorFunction") -> "TaylorFunction":
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(n, dtype=complex)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] += other.coeffs
        return TaylorFunction(out)

    def __sub__(self, other: "TaylorFunction") -> "TaylorFunction":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "TaylorFunction":
        return TaylorFunction(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "TaylorFunction":
        return TaylorFunction(-self.coeffs)

    def __repr__(self):
        return f"TaylorFunction(degree={self.degree})"


@dataclass(frozen=True, eq=False)
class BoundarySamples:
    """Values of a function on the circle |z| = radius at M equispaced points.

    M must be a power of two so the radix-2 FFT round trip applies.
    """

    radius: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 0.0 < self.radius <= 1.0:
            raise DomainError(f"sampling radius must lie in (0, 1], got {self.radius}")
        v = np.asarray(self.values, dtype=complex)
        m = len(v)
        if m < 2 or m & (m - 1):
            raise ValueError(f"sample count must be a power of two >= 2, got {m}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def count(self) -> int:
        return len(self.values)


def constant(c) -> TaylorFunction:
    return TaylorFunction([c])


def monomial(n: int) -> TaylorFunction:
    if n < 0:
        raise ValueError("monomial exponent must be nonnegative")
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    return TaylorFunction(c)


def geometric(q, degree: int = DEFAULT_DEGREE) -> TaylorFunction:
    """Truncation of 1/(1 - q z) = sum q**k z**k; requires |q| < 1."""
    q = complex(q)
    if abs(q) >= 1.0:
        raise DomainError("geometric ratio must satisfy |q| < 1")
    return TaylorFunction(q ** np.arange(degree + 1))


def _check_disc(z, open_disc: bool = False):
    a = np.abs(z)
    limit = 1.0 - 1e-12 if open_disc else 1.0 + 1e-12
    if np.any(a > limit):
        where = "inside the open unit disc" if open_disc else "in the closed unit disc"
        raise DomainError(f"evaluation point must lie {where} (max |z| = {a.max():.6g})")


def evaluate(f: TaylorFunction, z):
    """Evaluate f at z (scalar or array), |z| <= 1, by Horner's scheme."""
    _check_disc(z)
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, f.coeffs[-1], dtype=complex)
    for ck in f.coeffs[-2::-1]:
        out = out * z + ck
    return out if out.shape else complex(out)


def derivative(f: TaylorFunction) -> TaylorFunction:
    if f.degree == 0:
        return TaylorFunction([0.0])
    k = np.arange(1, len(f.coeffs))
    return TaylorFunction(f.coeffs[1:] * k)


def reflect(f: TaylorFunction) -> TaylorFunction:
    """z -> f(-z); exact involution on the coefficients."""
    signs = np.where(np.arange(len(f.coeffs)) % 2 == 0, 1.0, -1.0)
    return TaylorFunction(f.coeffs * signs)


def circle_values(coeffs: np.ndarray, radius: float, m: int) -> np.ndarray:
    """Values of sum c_k z^k on |z| = radius at m equispaced angles.

    Folds the radius-scaled coefficients modulo m before the inverse FFT, so
    the result is exact (up to rounding) for any coefficient length.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    k = np.arange(len(coeffs), dtype=float)
    scaled = coeffs if radius == 1.0 else coeffs * radius**k
    if len(scaled) <= m:
        folded = np.zeros(m, dtype=complex)
        folded[: len(scaled)] = scaled
    else:
        nrows = -(-len(scaled) // m)
        pad = np.zeros(nrows * m, dtype=complex)
        pad[: len(scaled)] = scaled
        folded = pad.reshape(nrows, m).sum(axis=0)
    return m * _fft.ifft(folded, workers=fft_workers())


def circle_values_batch(coeffs: np.ndarray, radii: np.ndarray, m: int) -> np.ndarray:
    """circle_values for many radii at once; returns an (n_radii, m) array."""
    coeffs = np.asarray(coeffs, dtype=complex)
    radii = np.asarray(radii, dtype=float)
    k = np.arange(len(coeffs), dtype=float)
    # radii**k as exp(k log r); r=0 rows handled separately to avoid log(0)
    safe = np.where(radii > 0.0, radii, 1.0)
    scaled = coeffs[None, :] * np.exp(np.outer(np.log(safe), k))
    if np.any(radii == 0.0):
        zero_rows = radii == 0.0
        scaled[zero_rows] = 0.0
        scaled[zero_rows, 0] = coeffs[0]
    if scaled.shape[1] <= m:
        folded = np.zeros((len(radii), m), dtype=complex)
        folded[:, : scaled.shape[1]] = scaled
    else:
        nrows = -(-scaled.shape[1] // m)
        pad = np.zeros((len(radii), nrows * m), dtype=complex)
        pad[:, : scaled.shape[1]] = scaled
        folded = pad.reshape(len(radii), nrows, m).sum(axis=1)
    return m * _fft.ifft(folded, axis=1, workers=fft_workers())


def boundary_samples(f: TaylorFunction, rho: float = RECOVERY_RADIUS,
                     m: int = RECOVERY_SAMPLES) -> BoundarySamples:
    """Sample f on the circle |z| = rho at m equispaced points (m a power of two)."""
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"sampling radius must lie in (0, 1], got {rho}")
    if m < 2 or m & (m - 1):
        raise ValueError(f"sample count must be a power of two, got {m}")
    return BoundarySamples(rho, circle_values(f.coeffs, rho, m))


def from_boundary_samples(samples: BoundarySamples, n: int,
                          noise_floor: float = NOISE_FLOOR_FACTOR) -> TaylorFunction:
    """Recover the degree-n Taylor truncation from circle samples.

    Coefficients come out of the forward FFT divided by rho**k, which
    amplifies sample rounding by rho**-k; entries whose magnitude is below
    noise_floor * eps * mean|values| * rho**-k are therefore
    indistinguishable from recovery noise and are zeroed (noise_floor=0
    disables this).  Recovery is faithful only for coefficients whose true
    magnitude sits above that floor and whose aliasing tail
    (sum of c_{k+jM} rho**jM) is negligible.
    """
    m = samples.count
    if n >= m // 2:
        raise ValueError(f"recovery degree must satisfy n < M/2 (n={n}, M={m})")
    spec = _fft.fft(samples.values, workers=fft_workers()) / m
    k = np.arange(n + 1, dtype=float)
    unscale = samples.radius**-k if samples.radius != 1.0 else np.ones(n + 1)
    coeffs = spec[: n + 1] * unscale
    if noise_floor:
        floor = noise_floor * _EPS * np.abs(samples.values).mean() * unscale
        coeffs = np.where(np.abs(coeffs) < floor, 0.0, coeffs)
    return TaylorFunction(coeffs)


def tail_band_magnitude(f: TaylorFunction, band: int = 8) -> float:
    """Max coefficient magnitude in the highest-index band.

    Used as the truncation/aliasing estimate for recovered series: when a
    recovery was deep enough, the top band has decayed to roundoff.
    """
    band = min(max(band, 1), len(f.coeffs))
    return float(np.abs(f.coeffs[-band:]).max())
