"""Bloch, Bergman, and Hardy norms against closed forms and structure checks."""

import numpy as np
import pytest

from hausdisc import (
    MeasureSpec,
    TaylorFunction,
    bergman_norm,
    bloch_norm,
    bloch_seminorm,
    build_quadrature,
    compose,
    hardy_norm,
    monomial,
)


@pytest.fixture(scope="module")
def area_rules():
    return {a: build_quadrature(MeasureSpec.area(a), level=2) for a in (0.0, 1.0)}


def random_function(rng, degree):
    k = np.arange(degree + 1)
    c = (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) / (k + 1)
    return TaylorFunction(c)


class TestBloch:
    def test_linear(self):
        assert abs(bloch_seminorm(TaylorFunction([0, 1])) - 1.0) <= 1e-10

    def test_constant(self):
        assert bloch_seminorm(TaylorFunction([5])) == 0.0

    def test_square(self):
        # calculus oracle: max of 2r(1-r^2) at r = 1/sqrt(3) gives 4/(3 sqrt 3)
        assert abs(bloch_seminorm(monomial(2)) - 4 / (3 * np.sqrt(3))) <= 1e-4

    def test_norm_adds_value_at_zero(self):
        assert abs(bloch_norm(TaylorFunction([0, 1])) - 1.0) <= 1e-10
        assert bloch_norm(TaylorFunction([5])) == 5.0
        assert abs(bloch_norm(TaylorFunction([1, 1])) - 2.0) <= 1e-10

    def test_mobius_invariance(self):
        rng = np.random.default_rng(20)
        for _ in range(20):
            f = random_function(rng, int(rng.integers(0, 17)))
            w = 0.7 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            s1 = bloch_seminorm(f)
            s2 = bloch_seminorm(compose(f, w))
            assert abs(s1 - s2) <= 1e-3 * (1 + s1)


class TestBergman:
    def test_constant_any_parameters(self, area_rules):
        for alpha, rule in area_rules.items():
            for p in (1.0, 2.0, 4.0):
                assert abs(bergman_norm(TaylorFunction([1]), p, alpha, rule) - 1.0) <= 1e-10

    def test_linear_p2_alpha0(self, area_rules):
        # oracle: int |z|^2 dA = 1/2
        v = bergman_norm(TaylorFunction([0, 1]), 2, 0.0, area_rules[0.0])
        assert abs(v - 2**-0.5) <= 1e-10

    def test_linear_p2_alpha1(self, area_rules):
        # oracle: (alpha+1) int r^2 (1-r^2)^alpha 2r dr = 1/(alpha+2) = 1/3
        v = bergman_norm(TaylorFunction([0, 1]), 2, 1.0, area_rules[1.0])
        assert abs(v - 3**-0.5) <= 1e-10

    def test_homogeneity(self, area_rules):
        rng = np.random.default_rng(21)
        rule = area_rules[0.0]
        for _ in range(10):
            f = random_function(rng, int(rng.integers(0, 30)))
            lam = complex(rng.standard_normal(), rng.standard_normal())
            a = bergman_norm(lam * f, 2, 0.0, rule)
            b = abs(lam) * bergman_norm(f, 2, 0.0, rule)
            assert abs(a - b) <= 1e-12 * max(1.0, b)

    def test_rule_mismatch_rejected(self, area_rules):
        with pytest.raises(ValueError):
            bergman_norm(TaylorFunction([1]), 2, 1.0, area_rules[0.0])
        disc = build_quadrature(MeasureSpec.discrete([0.1], [1.0]), 0)
        with pytest.raises(ValueError):
            bergman_norm(TaylorFunction([1]), 2, 0.0, disc)

    def test_p_below_one_rejected(self, area_rules):
        with pytest.raises(ValueError):
            bergman_norm(TaylorFunction([1]), 0.5, 0.0, area_rules[0.0])


class TestHardy:
    def test_monomials_have_unit_norm(self):
        for n in (1, 3, 7):
            for p in (1.0, 2.0, 4.0):
                assert abs(hardy_norm(monomial(n), p) - 1.0) <= 1e-10

    def test_constant(self):
        assert abs(hardy_norm(TaylorFunction([3j]), 2) - 3.0) <= 1e-12

    def test_one_plus_z(self):
        assert abs(hardy_norm(TaylorFunction([1, 1]), 2) - np.sqrt(2)) <= 1e-8

    def test_parseval(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            f = random_function(rng, 64)
            lhs = hardy_norm(f, 2) ** 2
            rhs = float(np.sum(np.abs(f.coeffs) ** 2))
            assert abs(lhs - rhs) <= 1e-8

    def test_growth_bound(self):
        # |f(z)| <= 2^(1/p) ||f||_Hp (1-|z|)^(-1/p)
        rng = np.random.default_rng(23)
        for p in (1.0, 2.0):
            for _ in range(5):
                f = random_function(rng, int(rng.integers(0, 20)))
                nf = hardy_norm(f, p)
                z = 0.99 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
                bound = 2 ** (1 / p) * nf * (1 - np.abs(z)) ** (-1 / p)
                assert np.all(np.abs(f(z)) <= bound * (1 + 1e-10))

    def test_p_validation(self):
        with pytest.raises(ValueError):
            hardy_norm(TaylorFunction([1]), 0.0)

    def test_small_p_allowed(self):
        assert abs(hardy_norm(TaylorFunction([2]), 0.5) - 2.0) <= 1e-10
