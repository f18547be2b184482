"""Kernel registry, measures, quadrature rules, and the divergence diagnostic."""

import numpy as np
import pytest
from scipy.integrate import quad

from hausdisc import (
    KernelSpec,
    MeasureSpec,
    build_quadrature,
    integrability_diagnostic,
    integrate,
)

# golden value from 1-D adaptive quadrature of 2r log(1/(1-r)) (analytically 3/2)
LOG_WEIGHT_MASS = 1.5


class TestMeasureSpec:
    def test_discrete_validation(self):
        with pytest.raises(ValueError):
            MeasureSpec.discrete([], [])
        with pytest.raises(ValueError):
            MeasureSpec.discrete([0.5], [-1.0])
        with pytest.raises(ValueError):
            MeasureSpec.discrete([0.5, 0.1], [1.0])

    def test_area_validation(self):
        with pytest.raises(ValueError):
            MeasureSpec.area(-1.0)


class TestBuildQuadrature:
    def test_discrete_passthrough(self):
        m = MeasureSpec.discrete([0.5], [2.0])
        rule = build_quadrature(m, level=3)
        assert np.array_equal(rule.nodes, [0.5])
        assert np.array_equal(rule.weights, [2.0])

    def test_discrete_level_independent(self):
        m = MeasureSpec.discrete([0.2, -0.3j], [1.0, 2.0])
        r0 = build_quadrature(m, level=0)
        r4 = build_quadrature(m, level=4)
        assert np.array_equal(r0.nodes, r4.nodes)
        assert np.array_equal(r0.weights, r4.weights)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0])
    def test_area_normalization(self, alpha):
        rule = build_quadrature(MeasureSpec.area(alpha), level=2)
        assert abs(rule.total_mass - 1.0) <= 1e-10

    def test_nodes_inside_parameter_domain(self):
        rule = build_quadrature(MeasureSpec.area(0.0), level=3)
        assert np.abs(rule.nodes).max() <= 1.0 - 1e-12

    def test_rejects_negative_level(self):
        with pytest.raises(ValueError):
            build_quadrature(MeasureSpec.area(0.0), level=-1)


class TestIntegrate:
    def test_unit_mass(self):
        rule = build_quadrature(MeasureSpec.area(0.0), level=2)
        assert abs(integrate(KernelSpec.constant(1.0), rule) - 1.0) <= 1e-10

    def test_second_moment(self):
        # oracle: int_0^1 r^2 * 2r dr = 1/2
        rule = build_quadrature(MeasureSpec.area(0.0), level=2)
        val = integrate(KernelSpec.constant(1.0), rule, lambda w: np.abs(w) ** 2)
        assert abs(val - 0.5) <= 1e-10

    def test_discrete_point_evaluation(self):
        rule = build_quadrature(MeasureSpec.discrete([0.5], [1.0]), level=0)
        val = integrate(KernelSpec.constant(1.0), rule,
                        lambda w: (1 + np.abs(w)) / (1 - np.abs(w)))
        assert abs(val - 3.0) <= 1e-14

    def test_linear_in_constant_factor(self):
        rule = build_quadrature(MeasureSpec.area(0.0), level=1)
        base = integrate(KernelSpec.constant(1.0), rule, 1.0)
        scaled = integrate(KernelSpec.constant(1.0), rule, 2.5)
        assert scaled == 2.5 * base

    def test_nonfinite_reports_node(self):
        rule = build_quadrature(MeasureSpec.discrete([0.5], [1.0]), level=0)
        with pytest.raises(ArithmeticError, match="0.5"):
            integrate(lambda w: 1.0 / (np.abs(w) - 0.5), rule)

    def test_callable_kernel(self):
        rule = build_quadrature(MeasureSpec.area(0.0), level=2)
        val = integrate(lambda w: np.abs(w) ** 2, rule)
        assert abs(val - 0.5) <= 1e-10


class TestKernelSpec:
    def test_registry_families(self):
        w = np.array([0.5, 0.25j])
        assert np.allclose(KernelSpec.constant(2.0)(w), [2, 2])
        assert np.allclose(KernelSpec.radial_power(2.0)(w), [0.25, 0.5625])
        assert np.allclose(KernelSpec.radial_log()(w),
                           np.log(1 / (1 - np.abs(w))))
        assert np.allclose(KernelSpec.polynomial([1, 2])(w), 1 + 2 * w)
        assert np.allclose(KernelSpec.gaussian_radial(1.0)(w),
                           np.exp(-np.abs(w) ** 2))

    def test_singular_metadata(self):
        assert KernelSpec.radial_power(-0.5).singular_near_boundary
        assert not KernelSpec.radial_power(1.0).singular_near_boundary

    def test_scale_composition(self):
        k = KernelSpec.radial_power(1.0).scaled(3.0)
        assert abs(k(0.5) - 3.0 * 0.5) < 1e-15

    def test_radial_flags(self):
        assert KernelSpec.constant(1.0).is_radial
        assert KernelSpec.gaussian_radial(2.0).is_radial
        assert not KernelSpec.polynomial([1, 2]).is_radial
        assert KernelSpec.polynomial([4.0]).is_radial


class TestIntegrabilityDiagnostic:
    def test_trivial_convergent(self):
        out = integrability_diagnostic(KernelSpec.constant(1.0), 1.0,
                                       MeasureSpec.area(0.0))
        assert out["converged"] and abs(out["estimate"] - 1.0) <= 1e-8

    def test_divergent_power(self):
        out = integrability_diagnostic(KernelSpec.radial_power(-3.0), 1.0,
                                       MeasureSpec.area(0.0))
        assert not out["converged"]
        assert out["estimate"] > 1e3

    def test_log_weight_golden(self):
        gold, err = quad(lambda r: 2 * r * np.log(1 / (1 - r)), 0, 1)
        assert abs(gold - LOG_WEIGHT_MASS) < 1e-10
        out = integrability_diagnostic(
            KernelSpec.constant(1.0),
            lambda w: np.log(1 / (1 - np.abs(w))),
            MeasureSpec.area(0.0),
        )
        assert out["converged"]
        assert abs(out["estimate"] - LOG_WEIGHT_MASS) <= 1e-6

    def test_discrete_always_converged(self):
        out = integrability_diagnostic(KernelSpec.radial_power(-3.0), 1.0,
                                       MeasureSpec.discrete([0.9], [1.0]))
        assert out["converged"]

    def test_refinement_improves_smooth_integrands(self):
        m = MeasureSpec.area(0.0)

        def estimate(level):
            rule = build_quadrature(m, level)
            return float(np.real(integrate(KernelSpec.constant(1.0), rule,
                                           lambda w: np.exp(np.abs(w)))))

        gold, _ = quad(lambda r: 2 * r * np.exp(r), 0, 1)
        errs = [abs(estimate(lv) - gold) for lv in (0, 1, 2)]
        assert errs[2] <= errs[0] + 1e-14
