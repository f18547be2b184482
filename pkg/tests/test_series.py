"""Taylor-series engine: evaluation, calculus ops, circle sampling round trips."""

import numpy as np
import pytest

from hausdisc import (
    BoundarySamples,
    DomainError,
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


def random_function(rng, degree):
    k = np.arange(degree + 1)
    c = (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) / (k + 1)
    return TaylorFunction(c)


class TestEvaluate:
    def test_identity_function(self):
        assert evaluate(TaylorFunction([0, 1]), 0.3 + 0.4j) == 0.3 + 0.4j

    def test_constant(self):
        f = constant(1.0)
        for z in (0, 0.5j, -0.9, 0.3 + 0.4j):
            assert f(z) == 1.0

    def test_square_at_half_i(self):
        # direct arithmetic: (i/2)^2 = -1/4
        assert abs(monomial(2)(0.5j) - (-0.25)) < 1e-15

    def test_rejects_outside_disc(self):
        with pytest.raises(DomainError):
            evaluate(TaylorFunction([0, 1]), 1.5)

    def test_boundary_allowed(self):
        assert abs(evaluate(TaylorFunction([0, 1]), 1.0) - 1.0) < 1e-15

    def test_linearity(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            f = random_function(rng, int(rng.integers(0, 20)))
            g = random_function(rng, int(rng.integers(0, 20)))
            a, b = complex(rng.standard_normal(), rng.standard_normal()), 1.7 - 0.2j
            z = 0.95 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            lhs = (a * f + b * g)(z)
            rhs = a * f(z) + b * g(z)
            assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))


class TestDerivative:
    def test_linear(self):
        assert np.array_equal(derivative(TaylorFunction([0, 1])).coeffs, [1])

    def test_term_by_term(self):
        assert np.array_equal(derivative(TaylorFunction([1, 0, 3])).coeffs, [0, 6])

    def test_cubic(self):
        assert np.array_equal(derivative(monomial(3)).coeffs, [0, 0, 3])

    def test_constant_to_zero(self):
        d = derivative(constant(5.0))
        assert d.degree == 0 and d.coeffs[0] == 0


class TestReflect:
    def test_odd(self):
        assert np.array_equal(reflect(TaylorFunction([0, 1])).coeffs, [0, -1])

    def test_even_fixed(self):
        assert np.array_equal(reflect(monomial(2)).coeffs, [0, 0, 1])

    def test_alternating(self):
        assert np.array_equal(reflect(TaylorFunction([1, 1, 1])).coeffs, [1, -1, 1])

    def test_involution_exact(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            f = random_function(rng, int(rng.integers(0, 40)))
            assert np.array_equal(reflect(reflect(f)).coeffs, f.coeffs)

    def test_derivative_anticommutes(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            f = random_function(rng, int(rng.integers(1, 30)))
            z = 0.9 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            lhs = derivative(reflect(f))(z)
            rhs = -reflect(derivative(f))(z)
            assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))


class TestBoundarySamples:
    def test_constant_samples(self):
        s = boundary_samples(constant(1.0), 0.5, 4)
        assert np.allclose(s.values, [1, 1, 1, 1], atol=1e-15)

    def test_identity_on_unit_circle(self):
        s = boundary_samples(TaylorFunction([0, 1]), 1.0, 4)
        assert np.allclose(s.values, [1, 1j, -1, -1j], atol=1e-15)

    def test_square_small_circle(self):
        s = boundary_samples(monomial(2), 0.5, 8)
        expected = 0.25 * np.exp(4j * np.pi * np.arange(8) / 8)
        assert np.allclose(s.values, expected, atol=1e-15)

    def test_rejects_bad_radius(self):
        with pytest.raises(DomainError):
            boundary_samples(constant(1.0), 1.5, 8)
        with pytest.raises(DomainError):
            boundary_samples(constant(1.0), 0.0, 8)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            boundary_samples(constant(1.0), 0.5, 12)

    def test_folding_matches_direct_evaluation(self):
        # sample count below the degree: folding keeps the values exact
        rng = np.random.default_rng(5)
        f = random_function(rng, 40)
        s = boundary_samples(f, 0.8, 16)
        z = 0.8 * np.exp(2j * np.pi * np.arange(16) / 16)
        assert np.abs(s.values - f(z)).max() < 1e-13


class TestRecovery:
    def test_small_roundtrip(self):
        f = TaylorFunction([1, 2, 3])
        back = from_boundary_samples(boundary_samples(f, 0.5, 16), 2)
        assert np.abs(back.coeffs - f.coeffs).max() < 1e-12

    def test_constant_padded(self):
        back = from_boundary_samples(boundary_samples(constant(5.0), 0.9, 16), 3)
        assert np.array_equal(back.coeffs, [5, 0, 0, 0])

    def test_mobius_symbol_expansion(self):
        # closed form: c_0 = w, c_k = -(1-|w|^2) wbar^(k-1) for phi_w, w = 0.5
        w = 0.5
        m = 1024
        z = 0.9 * np.exp(2j * np.pi * np.arange(m) / m)
        vals = (w - z) / (1 - w * z)
        back = from_boundary_samples(BoundarySamples(0.9, vals), 8)
        k = np.arange(9)
        expected = np.where(k == 0, w, -(1 - w**2) * w ** np.maximum(k - 1.0, 0))
        assert np.abs(back.coeffs - expected).max() < 1e-12

    def test_rejects_degree_beyond_nyquist(self):
        s = boundary_samples(constant(1.0), 0.9, 16)
        with pytest.raises(ValueError):
            from_boundary_samples(s, 8)

    def test_roundtrip_at_default_radius(self):
        rng = np.random.default_rng(6)
        worst = 0.0
        for _ in range(20):
            f = random_function(rng, 64)
            back = from_boundary_samples(boundary_samples(f, 0.9, 256), 64)
            worst = max(worst, float(np.abs(back.coeffs - f.coeffs).max()))
        assert worst <= 1e-12

    def test_roundtrip_small_radius_shallow(self):
        # rho = 0.5 amplifies recovery noise by 2^k: depth capped where the
        # 1e-12 target is representable at all
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(20):
            f = random_function(rng, 12)
            back = from_boundary_samples(boundary_samples(f, 0.5, 256), 12)
            worst = max(worst, float(np.abs(back.coeffs - f.coeffs).max()))
        assert worst <= 1e-12

    def test_noise_floor_zeroes_subrecovery_coefficients(self):
        f = TaylorFunction([0, 1])
        back = from_boundary_samples(boundary_samples(f, 0.9, 256), 64)
        assert np.array_equal(back.coeffs[2:], np.zeros(63))


def test_tail_band_magnitude():
    f = TaylorFunction([1, 2, 3, 4e-14])
    assert tail_band_magnitude(f, band=1) == 4e-14
    assert tail_band_magnitude(f, band=2) == 3.0


def test_geometric_series():
    f = geometric(0.5, degree=10)
    assert np.allclose(f.coeffs, 0.5 ** np.arange(11))
    with pytest.raises(DomainError):
        geometric(1.0)


def test_arithmetic_helpers():
    f = TaylorFunction([1, 2])
    g = TaylorFunction([0, 0, 3])
    assert np.array_equal((f + g).coeffs, [1, 2, 3])
    assert np.array_equal((f - g).coeffs, [1, 2, -3])
    assert np.array_equal((2 * f).coeffs, [2, 4])
    assert np.array_equal((-f).coeffs, [-1, -2])
