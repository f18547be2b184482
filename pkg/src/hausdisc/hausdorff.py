"""Kernel-averaged Moebius composition operators on Taylor series.

The operator maps f to the kernel-weighted quadrature sum of composites
f∘phi_w over the measure's nodes, coefficientwise:

    (H f)(z) = sum_i K(w_i) mu_i (f∘phi_{w_i})(z).

Discrete measures apply the literal per-atom composition.  Tensor-product
area rules use an exact reorganization of the same node sum: writing a node
as w = r e^{i theta}, the rotation identity phi_w(z) = e^{i theta}
phi_r(e^{-i theta} z) turns the equispaced angular sum into a congruence
filter (output index k receives monomial m only when k = m + q mod n_theta,
with q the kernel's angular frequency), so only per-radius coefficient
vectors of phi_r powers are needed.  Those are recovered once per rule from
samples on a circle close to the boundary and cached on the operator.

The shrunk family replaces each composition parameter w by eps*w and
reflects the result; with a unit-mass kernel it tends to the identity as
eps -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

from .errors import DomainError
from .measure import KernelSpec, MeasureSpec, QuadratureRule, integrate
from .mobius import DEGREE_CAP, MobiusParam, compose, composition_degree
from .series import TaylorFunction, fft_workers, next_pow2, reflect

#: contour nodes never come closer to the boundary than this
CONTOUR_GUARD = 1e-6
#: minimum contour sample count for coefficient sequences
CONTOUR_SAMPLES_MIN = 4096
CONTOUR_SAMPLES_MAX = 1 << 18
#: radius-chunk size bounding the memory of the power-recovery buffers
_CHUNK_RADII = 64


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """Finite stretch c_0..c_nmax of an operator's boundary-pairing coefficients."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.values).max())

    def decay_rate(self) -> float:
        """Least-squares power-law exponent of |c_n| against n (n >= 1).

        No finite stretch decides membership in a boundary smoothness
        class; this is a descriptive report only.
        """
        n = np.arange(1, len(self.values))
        mags = np.abs(self.values[1:])
        keep = mags > 0
        if keep.sum() < 2:
            return 0.0
        slope = np.polyfit(np.log(n[keep]), np.log(mags[keep]), 1)[0]
        return float(slope)


@dataclass(frozen=True)
class ComposeParams:
    """Overrides for the composition step inside an operator."""

    n: int | None = None
    rho: float = 0.9
    m: int | None = None


@dataclass(eq=False)
class HausdorffOperator:
    """The pair (K, mu) together with the quadrature rule realizing mu."""

    kernel: KernelSpec
    measure: MeasureSpec
    rule: QuadratureRule
    compose_params: ComposeParams = field(default_factory=ComposeParams)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.rule.measure is not self.measure and self.rule.measure != self.measure:
            raise ValueError("quadrature rule was built from a different measure")

    # -- plumbing -----------------------------------------------------------

    def _kernel_at_nodes(self) -> np.ndarray:
        vals = np.asarray(self.kernel(self.rule.nodes), dtype=complex)
        bad = ~np.isfinite(vals)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ArithmeticError(
                f"kernel is not finite at node {self.rule.nodes[i]:.9g} (index {i})"
            )
        return vals

    def kernel_mass(self) -> complex:
        return integrate(self.kernel, self.rule)

    def normalized(self) -> "HausdorffOperator":
        """Rescale the kernel so its integral over the measure is exactly 1."""
        total = self.kernel_mass()
        if abs(total) <= 1e-10:
            raise ZeroDivisionError(
                f"kernel mass {total:.3g} is too close to zero to normalize"
            )
        return HausdorffOperator(self.kernel.scaled(1.0 / total), self.measure,
                                 self.rule, self.compose_params)

    # -- application --------------------------------------------------------

    def apply(self, f: TaylorFunction) -> TaylorFunction:
        """Coefficientwise sum of K(w_i) mu_i f∘phi_{w_i}; linear in f."""
        if self.measure.is_discrete:
            kv = self._kernel_at_nodes()
            weights = kv * self.rule.weights
            return _discrete_sum(weights, self.rule.nodes, f, self.compose_params)
        return self._tensor_apply(f, eps=None)

    def apply_epsilon(self, eps: float, f: TaylorFunction) -> TaylorFunction:
        """Shrunk-and-reflected application: nodes w replaced by eps*w, output reflected."""
        if not 0.0 < eps < 1.0:
            raise ValueError(f"shrink factor must lie in (0, 1), got {eps}")
        if self.measure.is_discrete:
            kv = self._kernel_at_nodes()
            weights = kv * self.rule.weights
            out = _discrete_sum(weights, eps * self.rule.nodes, f, self.compose_params)
            return reflect(out)
        return reflect(self._tensor_apply(f, eps=eps))

    def _tensor_apply(self, f: TaylorFunction, eps: float | None) -> TaylorFunction:
        rule = self.rule
        if not rule.is_tensor:
            raise ValueError("area application requires a tensor quadrature rule")
        mmax = max(f.degree, 32)
        key = ("comb", eps, mmax)
        combs = self._cache.get(key)
        if combs is None:
            combs = _build_combs(self.kernel, rule, mmax, eps,
                                 cap=self.compose_params.n)
            self._cache[key] = combs
        ncap = combs["ncap"]
        n_t = rule.n_theta
        out = np.zeros(ncap + 1, dtype=complex)
        for coeff_q, offset, table in combs["tables"]:
            # table[m, l] routes monomial m to output index (m+offset) % n_t + l*n_t
            for m in range(min(f.degree, table.shape[0] - 1) + 1):
                a = f.coeffs[m]
                if a == 0:
                    continue
                k0 = (m + offset) % n_t
                ks = k0 + n_t * np.arange(table.shape[1])
                sel = ks <= ncap
                out[ks[sel]] += coeff_q * a * table[m, sel]
        return TaylorFunction(out)


def _discrete_sum(weights: np.ndarray, atoms: np.ndarray, f: TaylorFunction,
                  params: ComposeParams) -> TaylorFunction:
    parts = []
    for wgt, atom in zip(weights, atoms):
        g = compose(f, MobiusParam(atom), n=params.n, rho=params.rho, m=params.m)
        parts.append((wgt, g.coeffs))
    n = max(len(c) for _, c in parts)
    out = np.zeros(n, dtype=complex)
    for wgt, c in parts:
        out[: len(c)] += wgt * c
    return TaylorFunction(out)


def _sampling_params(max_radius: float, ncap: int, n_theta: int) -> tuple[float, int]:
    """Recovery circle radius and sample count for phi_r power coefficients.

    The radius is pushed toward the boundary so the rho**-k unscaling stays
    below ~e^5; the sample count is then set so the aliasing tail
    (max_radius*rho)**(M-ncap) is negligible.
    """
    rho = max(0.9, math.exp(-5.0 / max(ncap, 1)))
    decay = -math.log(max(max_radius, 1e-6) * rho)
    m = ncap + int(math.ceil(37.0 / max(decay, 1e-12)))
    m = next_pow2(max(m, 2 * (ncap + 1), 2 * n_theta))
    return rho, min(m, CONTOUR_SAMPLES_MAX)


def _build_combs(kernel: KernelSpec, rule: QuadratureRule, mmax: int,
                 eps: float | None, cap: int | None = None) -> dict:
    """Per-radius power tables contracted with the radial kernel weights.

    Returns, for each kernel angular frequency q with coefficient b_q, a
    table T_q[m, l] = sum_r b-weighted W_r c_k(phi_{r'}^m) at k = (m+q) %
    n_theta + l*n_theta, masked by the per-node composition degree.  r' is
    the (possibly eps-shrunk) composition radius while the kernel always
    sees the original node radius.
    """
    radii = rule.radii
    comp_radii = radii if eps is None else eps * radii
    deg_cap = cap if cap is not None else DEGREE_CAP
    base = max(mmax, 64)
    per_node = np.minimum(
        base + np.ceil(40.0 / (1.0 - comp_radii)), deg_cap
    ).astype(int)
    ncap = int(per_node.max())
    n_t = rule.n_theta
    rho, m_samp = _sampling_params(float(comp_radii.max()), ncap, n_t)
    q_dim = m_samp // n_t
    l_count = ncap // n_t + 1

    if kernel.is_radial:
        freq_terms = [(1.0 + 0j, 0, kernel.radial_profile(radii))]
    elif kernel.family == "polynomial_in_w":
        freq_terms = [
            (bq * kernel.scale, q, radii**q)
            for q, bq in enumerate(kernel.params) if bq != 0
        ]
    else:  # pragma: no cover - registry kernels are radial or polynomial
        raise ValueError(f"unsupported kernel family {kernel.family!r} for area rules")

    j = np.arange(m_samp)
    circle = rho * np.exp(2j * np.pi * j / m_samp)
    tables = []
    for coeff_q, q, profile in freq_terms:
        wvec = np.asarray(profile, dtype=complex) * rule.radial_weights
        table = np.zeros((mmax + 1, l_count), dtype=complex)
        # m = 0: phi^0 = 1 contributes only at k = 0
        if q % n_t == 0:
            table[0, 0] = wvec.sum()
        for lo in range(0, len(radii), _CHUNK_RADII):
            hi = min(lo + _CHUNK_RADII, len(radii))
            rr = comp_radii[lo:hi]
            vals = (rr[:, None] - circle[None, :]) / (1.0 - rr[:, None] * circle[None, :])
            cum = np.ones_like(vals)
            for m in range(1, mmax + 1):
                cum = cum * vals
                k0 = (m + q) % n_t
                phase = np.exp(-2j * np.pi * k0 / m_samp * j)
                folded = (cum * phase[None, :]).reshape(hi - lo, n_t, q_dim).sum(axis=1)
                spec = _fft.fft(folded, axis=1, workers=fft_workers()) / m_samp
                ks = k0 + n_t * np.arange(l_count)
                unscale = rho ** -(ks.astype(float))
                mask = ks[None, :] <= per_node[lo:hi, None]
                table[m] += (spec[:, np.arange(l_count) % q_dim] * mask
                             * wvec[lo:hi, None]).sum(axis=0) * unscale
        tables.append((coeff_q, q, table))
    return {"ncap": ncap, "tables": tables}


def apply_discrete(d, atoms, f: TaylorFunction,
                   params: ComposeParams | None = None) -> TaylorFunction:
    """sum_n d_n f∘phi_{w_n} for caller-supplied (possibly complex) weights.

    Positivity is not required here, unlike MeasureSpec weights; infinite
    families must be truncated by the caller (see tail_mass).
    """
    d = np.asarray(list(d), dtype=complex)
    atoms = [a if isinstance(a, MobiusParam) else MobiusParam(a) for a in atoms]
    if len(d) != len(atoms):
        raise ValueError(f"got {len(d)} weights for {len(atoms)} atoms")
    params = params or ComposeParams()
    return _discrete_sum(d, np.array([a.w for a in atoms]), f, params)


def tail_mass(weights, cut: int, horizon: int = 100000) -> float:
    """sum of |d_n| for n > cut, scanning at most horizon terms of the sequence."""
    total = 0.0
    for i, d in enumerate(weights):
        if i >= horizon:
            break
        if i > cut:
            total += abs(complex(d))
    return total


# -- boundary-pairing coefficient sequences ---------------------------------

def _contour_samples_for(modulus: float, n_max: int) -> int:
    need = int(math.ceil((n_max + 60.0) / max(1.0 - modulus, 1e-12)))
    return min(next_pow2(max(CONTOUR_SAMPLES_MIN, need)), CONTOUR_SAMPLES_MAX)


def _atom_pairing(w: complex, g: TaylorFunction, n_max: int, m: int) -> np.ndarray:
    """Trapezoid values of the circle integrals I_n(w), n = 0..n_max.

    I_n(w) = (1/2pi) int ((w e^{it} - 1)/(e^{it} - conj w))^n g(e^{it}) dt;
    the integrand's inner factor is unimodular on the contour and its pole
    sits at conj(w), so the trapezoid alias decays like |w|^(M-n).
    """
    t = 2.0 * np.pi * np.arange(m) / m
    e = np.exp(1j * t)
    u = (w * e - 1.0) / (e - np.conjugate(w))
    gv = g(e)
    out = np.empty(n_max + 1, dtype=complex)
    cum = gv.copy()
    out[0] = cum.mean()
    for n in range(1, n_max + 1):
        cum = cum * u
        out[n] = cum.mean()
    return out


def coefficient_sequence(H: HausdorffOperator, g: TaylorFunction,
                         n_max: int, m: int | None = None) -> CoefficientSequence:
    """c_n = sum_i K(w_i) mu_i I_n(w_i) by contour trapezoid sums.

    g must be a polynomial (continuous up to the boundary).  Nodes within
    1e-6 of the boundary are rejected: the integrand's pole approaches the
    contour and no affordable trapezoid resolves it.  The sample count per
    node defaults to nextpow2(max(4096, (n_max+60)/(1-|w|))).
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    rule = H.rule
    moduli = np.abs(rule.nodes)
    if np.any(moduli >= 1.0 - CONTOUR_GUARD):
        raise DomainError(
            "coefficient sequence needs all nodes at |w| < 1 - 1e-6; "
            "build the rule without boundary grading (gamma=1, low level)"
        )
    kv = H._kernel_at_nodes()
    if rule.is_tensor and H.kernel.is_radial:
        # rotation identity collapses the angular sum: only n = k (mod n_theta)
        # survives, pairing with g's coefficient at that index
        n_t = rule.n_theta
        out = np.zeros(n_max + 1, dtype=complex)
        profile = H.kernel.radial_profile(rule.radii)
        for r, wgt, kval in zip(rule.radii, rule.radial_weights, profile):
            ms = m or _contour_samples_for(float(r), n_max)
            pair = _per_radius_pairings(float(r), g, n_max, ms, n_t)
            out += kval * wgt * pair
        return CoefficientSequence(out)
    weights = kv * rule.weights
    out = np.zeros(n_max + 1, dtype=complex)
    for w, wgt in zip(rule.nodes, weights):
        ms = m or _contour_samples_for(abs(w), n_max)
        out += wgt * _atom_pairing(complex(w), g, n_max, ms)
    return CoefficientSequence(out)


def _per_radius_pairings(r: float, g: TaylorFunction, n_max: int, m: int,
                         n_t: int) -> np.ndarray:
    """Angular average of I_n over the equispaced nodes at one radius.

    For real r, I_n(r e^{i theta}) carries the phase e^{i(n-k) theta}
    against g's k-th coefficient, so uniform angles keep only k = n mod
    n_theta; the radial factor is the pairing of the contour powers with
    that single monomial.
    """
    t = 2.0 * np.pi * np.arange(m) / m
    e = np.exp(1j * t)
    u = (r * e - 1.0) / (e - r)
    out = np.zeros(n_max + 1, dtype=complex)
    cum = np.ones(m, dtype=complex)
    for n in range(0, n_max + 1):
        if n > 0:
            cum = cum * u
        k = n % n_t
        if k <= g.degree and g.coeffs[k] != 0:
            out[n] = g.coeffs[k] * (cum * e**k).mean()
    return out


def linear_coefficient_sequence(H: HausdorffOperator, n_max: int) -> CoefficientSequence:
    """Closed-form sequence for the linear test function g(z) = z.

    c_n = n * integral K(w) w^(n-1) (|w|^2 - 1) d(mu); c_0 = 0 by the n
    factor.  Evaluated by direct quadrature, no contour needed.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    kv = H._kernel_at_nodes()
    nodes = H.rule.nodes
    weights = kv * H.rule.weights
    factor = weights * (np.abs(nodes) ** 2 - 1.0)
    out = np.zeros(n_max + 1, dtype=complex)
    power = np.ones_like(nodes)
    for n in range(1, n_max + 1):
        out[n] = n * np.sum(factor * power)
        power = power * nodes
    return CoefficientSequence(out)
