import math

import numpy as np
import pytest

from rigidmem import fraccalc, models
from rigidmem.integrators import FracConfig, integrate_frac_abm

P321 = models.RigidBodyParams(3, 2, 1)


class TestSampledFunction:
    def test_validation(self):
        with pytest.raises(ValueError):
            fraccalc.SampledFunction([1.0], 0.1)
        with pytest.raises(ValueError):
            fraccalc.SampledFunction([1.0, 2.0], 0.0)

    def test_times(self):
        f = fraccalc.SampledFunction([0.0, 1.0, 2.0], 0.5)
        assert np.array_equal(f.times, [0.0, 0.5, 1.0])


class TestCaputoMonomial:
    def test_classical_limit_of_linear(self):
        val = fraccalc.caputo_partial_monomial(1.0, 1.0 - 1e-8, 2.7)
        assert val == pytest.approx(1.0, rel=1e-6)

    def test_gamma_ratio_value(self):
        val = fraccalc.caputo_partial_monomial(2.0, 0.5, 1.0)
        assert val == pytest.approx(2.0 / math.gamma(2.5), rel=1e-12)
        assert val == pytest.approx(1.5045055, abs=1e-6)

    def test_energy_gradient_identity(self):
        # gamma = order + 1 gives (order+1) * Gamma(order+1) * x
        for order in (0.3, 0.5, 0.82):
            for x in (0.0, 0.7, 2.0):
                val = fraccalc.caputo_partial_monomial(order + 1, order, x)
                assert val == pytest.approx(
                    (order + 1) * math.gamma(order + 1) * x, rel=1e-12,
                    abs=1e-12)

    def test_classical_limit_general_power(self):
        got = fraccalc.caputo_partial_monomial(2.5, 1.0 - 1e-8, 1.7)
        assert got == pytest.approx(2.5 * 1.7**1.5, rel=1e-6)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            fraccalc.caputo_partial_monomial(0.0, 0.5, 1.0)
        with pytest.raises(ValueError):
            fraccalc.caputo_partial_monomial(1.0, 0.5, -1.0)
        with pytest.raises(ValueError):
            fraccalc.caputo_partial_monomial(1.0, 1.5, 1.0)


class TestRlIntegral:
    def test_order_one_of_constant(self):
        h = 1e-3
        f = fraccalc.SampledFunction(np.ones(1001), h)
        out = fraccalc.rl_integral(f, 1.0)
        assert np.max(np.abs(out.values - f.times)) < 1e-10

    def test_half_order_of_constant(self):
        h = 1e-3
        f = fraccalc.SampledFunction(np.ones(1001), h)
        out = fraccalc.rl_integral(f, 0.5)
        exact = f.times**0.5 / math.gamma(1.5)
        assert np.max(np.abs(out.values - exact)) < 1e-3

    def test_order_one_reduces_to_trapezoid(self):
        h = 0.01
        ts = np.arange(0, 1 + h / 2, h)
        vals = np.sin(3 * ts)
        out = fraccalc.rl_integral(fraccalc.SampledFunction(vals, h), 1.0)
        ref = np.concatenate([[0.0], np.cumsum((vals[1:] + vals[:-1]) / 2 * h)])
        assert np.max(np.abs(out.values - ref)) < 1e-12


class TestCaputoL1:
    def test_linear_function(self):
        h = 1e-3
        ts = np.arange(0, 1 + h / 2, h)
        out = fraccalc.caputo_l1(fraccalc.SampledFunction(ts.copy(), h), 0.5)
        exact = ts**0.5 / math.gamma(1.5)
        assert np.max(np.abs(out.values - exact)) < 1e-3

    def test_constant_vanishes(self):
        out = fraccalc.caputo_l1(
            fraccalc.SampledFunction(np.full(200, 3.7), 0.01), 0.3)
        assert np.max(np.abs(out.values)) == 0.0

    def test_residual_against_abm_solution(self):
        # scheme consistency away from the t^alpha initial layer
        h = 1e-3
        cfg = FracConfig(order=0.5, h=h)
        traj = integrate_frac_abm(lambda x: -x, cfg, [1.0], 1.0)
        sf = fraccalc.SampledFunction(traj.states[:, 0], h)
        deriv = fraccalc.caputo_l1(sf, 0.5)
        resid = deriv.values + traj.states[:, 0]
        assert np.max(np.abs(resid[100:])) < 5e-3

    def test_fundamental_theorem_roundtrip(self):
        h = 1e-3
        ts = np.arange(0, 1 + h / 2, h)
        x = fraccalc.SampledFunction(np.sin(ts) + 1.0, h)
        back = fraccalc.rl_integral(fraccalc.caputo_l1(x, 0.5), 0.5)
        assert np.max(np.abs(back.values - (x.values - x.values[0]))) < 5e-3


class TestMittagLeffler:
    def test_exponential_case(self):
        assert fraccalc.mittag_leffler(1.0, 1.0) == pytest.approx(
            math.e, rel=1e-14)

    def test_zero_argument(self):
        for order in (0.2, 0.5, 1.0, 2.0):
            assert fraccalc.mittag_leffler(order, 0.0) == 1.0

    def test_cosh_case(self):
        assert fraccalc.mittag_leffler(2.0, 1.0) == pytest.approx(
            math.cosh(1.0), rel=1e-14)

    def test_half_order_against_erfc(self):
        # E_{1/2}(-x) = exp(x^2) erfc(x)
        for x in (0.5, 1.0, 2.0):
            got = fraccalc.mittag_leffler(0.5, -x)
            ref = math.exp(x * x) * math.erfc(x)
            assert got == pytest.approx(ref, rel=1e-10)

    def test_asymptotic_branch(self):
        got = fraccalc.mittag_leffler(0.5, -20.0)
        ref = math.exp(400.0) * math.erfc(20.0)
        assert got == pytest.approx(ref, rel=0.05)

    def test_domain_errors(self):
        with pytest.raises(OverflowError):
            fraccalc.mittag_leffler(0.5, 51.0)
        with pytest.raises(OverflowError):
            fraccalc.mittag_leffler(0.5, 50.0)
        with pytest.raises(ValueError):
            fraccalc.mittag_leffler(0.0, 1.0)

    def test_abm_cross_check(self):
        # ABM solution of D^alpha y = lam*y at t equals E_alpha(lam * t^alpha)
        for lam in (-1.0, -0.5):
            for order in (0.5, 0.82):
                cfg = FracConfig(order=order, h=1e-3)
                traj = integrate_frac_abm(lambda x: lam * x, cfg, [1.0], 1.0)
                ref = fraccalc.mittag_leffler(order, lam)
                assert abs(traj.final_state[0] - ref) < 2e-3


class TestBracketRhsCheck:
    def test_example_value(self):
        out = fraccalc.bracket_rhs_check(P321, 0.5, [1.0, 1.0, 1.0])
        assert np.allclose(out / 1.5, [1, -2, 1], rtol=1e-12)

    def test_axis_state(self):
        out = fraccalc.bracket_rhs_check(P321, 0.5, [2.0, 0.0, 0.0])
        assert np.array_equal(out, np.zeros(3))

    def test_classical_limit(self):
        x = np.array([0.5, 1.5, 2.5])
        out = fraccalc.bracket_rhs_check(P321, 1.0, x)
        assert np.allclose(out / 2.0, models.rhs_classical(P321, x),
                           rtol=1e-12)

    def test_matches_classical_on_positive_octant(self):
        rng = np.random.default_rng(99)
        for _ in range(100):
            x = rng.uniform(0.01, 3.0, 3)
            order = rng.uniform(0.1, 1.0)
            out = fraccalc.bracket_rhs_check(P321, order, x) / (order + 1)
            ref = models.rhs_classical(P321, x)
            assert np.allclose(out, ref, rtol=1e-10, atol=1e-12)

    def test_negative_coordinate_rejected(self):
        with pytest.raises(ValueError):
            fraccalc.bracket_rhs_check(P321, 0.5, [-0.1, 1.0, 1.0])
