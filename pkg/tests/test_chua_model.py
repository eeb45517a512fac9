"""Tests for the state equations, equilibria and linearization"""

import math

import numpy as np
import pytest

from src.exceptions import ContractViolationError, DivergedError
from src.models.chua_model import (ORIGIN, ChuaParams, State, characteristic_polynomial,
                                   equilibria, equilibrium_eigenvalues, jacobian,
                                   jacobian_trace, make_rhs, make_tangent_rhs,
                                   nearest_equilibrium, nonlinearity_slope, nonlinearity_u,
                                   residual, vector_field)
from src.models.describing_function import interception_points


class TestParams:
    def test_gamma_and_g_total(self, beta13):
        assert beta13.gamma == 5.5
        assert beta13.g_total == pytest.approx(-1.07, abs=1e-15)

    @pytest.mark.parametrize('field', ['alpha', 'beta'])
    def test_rejects_non_positive(self, field):
        values = {'alpha': 10.0, 'beta': 13.3, 'g0': 0.0, 'I0': 1.0, field: 0.0}
        with pytest.raises(ValueError):
            ChuaParams(**values)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            ChuaParams(alpha=10.0, beta=13.3, g0=math.nan, I0=1.0)

    def test_main_range(self, beta13):
        assert beta13.in_main_range()
        assert not beta13.replace(beta=9.0).in_main_range()
        assert not beta13.replace(beta=31.0).in_main_range()

    def test_replace_with_g_total_keeps_i0(self, beta13):
        p = beta13.replace(g_total=-0.5)
        assert p.I0 == beta13.I0
        assert p.g_total == pytest.approx(-0.5, abs=1e-15)

    def test_dict_round_trip_accepts_g_total(self):
        p = ChuaParams.from_dict({'alpha': 10, 'beta': 20, 'I0': -0.75, 'g_total': -0.5})
        assert p.g0 == 0.25
        assert ChuaParams.from_dict(p.to_dict()) == p

    def test_from_dict_lists_missing(self):
        with pytest.raises(ValueError, match='g0'):
            ChuaParams.from_dict({'alpha': 10, 'beta': 20, 'I0': 1.0})


class TestNonlinearity:
    def test_vanishes_at_origin(self, beta13):
        assert nonlinearity_u(0.0, beta13) == 0.0

    @pytest.mark.parametrize('x', [0.1, 1.0, 3.7, 12.0])
    def test_is_odd(self, beta20, x):
        assert nonlinearity_u(-x, beta20) == -nonlinearity_u(x, beta20)

    def test_slope_at_origin_is_minus_g_total(self, beta20):
        assert nonlinearity_slope(0.0, beta20) == pytest.approx(-beta20.g_total, abs=1e-15)

    def test_overflow_guard(self, beta13):
        with pytest.raises(DivergedError):
            nonlinearity_u(701.0, beta13)

    def test_worked_example(self):
        p = ChuaParams(alpha=10.0, beta=13.3, g0=0.0, I0=1.0)
        assert nonlinearity_u(1.0, p) == pytest.approx(-math.sinh(1.0), rel=1e-15)


def random_states(count=100, bound=5.0, seed=0):
    rng = np.random.default_rng(seed)
    return [State.from_array(v) for v in rng.uniform(-bound, bound, (count, 3))]


class TestVectorField:
    def test_origin_is_fixed(self, beta20):
        assert vector_field(ORIGIN, beta20) == ORIGIN

    @pytest.mark.parametrize('fixture', ['beta20', 'beta13'])
    def test_reflection_equivariance(self, request, fixture):
        p = request.getfixturevalue(fixture)
        for point in random_states():
            forward = vector_field(point, p).as_array()
            mirrored = vector_field(-point, p).as_array()
            assert np.allclose(mirrored, -forward, rtol=1e-14, atol=1e-12)

    @pytest.mark.parametrize('fixture', ['beta20', 'beta13'])
    def test_jacobian_matches_finite_differences(self, request, fixture):
        p = request.getfixturevalue(fixture)
        h = 1e-6
        for point in random_states(seed=1):
            numeric = np.empty((3, 3))
            for k in range(3):
                step = np.zeros(3)
                step[k] = h
                plus = vector_field(State.from_array(point.as_array() + step), p).as_array()
                minus = vector_field(State.from_array(point.as_array() - step), p).as_array()
                numeric[:, k] = (plus - minus) / (2 * h)
            assert np.allclose(jacobian(point, p), numeric, rtol=1e-6, atol=1e-6), point

    def test_trace_identity(self, beta20):
        for x in (-3.0, 0.0, 0.7, 2.0):
            assert np.trace(jacobian(State(x, 0.0, 0.0), beta20)) == pytest.approx(
                jacobian_trace(x, beta20), rel=1e-14)

    def test_array_rhs_matches_vector_field(self, beta20):
        point = State(1.2, -0.3, 0.8)
        assert np.allclose(make_rhs(beta20)(0.0, point.as_array()),
                           vector_field(point, beta20).as_array(), rtol=1e-15, atol=0)

    def test_tangent_rhs_layout(self, beta20):
        point = State(0.4, 0.1, -0.2)
        frame = np.eye(3)
        y = np.concatenate([point.as_array(), frame.ravel(), [0.0]])
        out = make_tangent_rhs(beta20)(0.0, y)
        J = jacobian(point, beta20)
        assert np.allclose(out[:3], vector_field(point, beta20).as_array())
        assert np.allclose(out[3:12].reshape(3, 3), J)
        assert out[12] == pytest.approx(np.trace(J), rel=1e-14)

    def test_array_rhs_guards_overflow(self, beta13):
        with pytest.raises(DivergedError) as info:
            make_rhs(beta13)(3.0, np.array([800.0, 0.0, 0.0]))
        assert info.value.t == 3.0


class TestEquilibria:
    def test_origin_only_for_positive_g_total(self):
        assert equilibria(ChuaParams(alpha=10.0, beta=13.3, g0=0.5, I0=1.0)) == [ORIGIN]

    def test_origin_only_for_negative_i0(self):
        assert equilibria(ChuaParams(alpha=10.0, beta=13.3, g0=-1.005, I0=-0.0003)) == [ORIGIN]

    def test_nonzero_pair(self):
        p = ChuaParams(alpha=10.0, beta=13.3, g0=-1.005, I0=0.0003)
        points = equilibria(p)
        assert len(points) == 3
        x_star = points[1].x
        assert x_star == pytest.approx(5.14, abs=0.01)
        assert points[2] == -points[1]
        assert points[1].z == -x_star
        for point in points:
            assert residual(point, p) < 1e-9

    def test_nonzero_pair_is_stable_after_pitchfork(self):
        p = ChuaParams(alpha=10.0, beta=13.3, g0=-1.005, I0=0.0003)
        assert equilibrium_eigenvalues(equilibria(p)[1], p).stable

    def test_eigenvalues_require_an_equilibrium(self, beta13):
        with pytest.raises(ContractViolationError):
            equilibrium_eigenvalues(State(1.0, 0.0, 0.0), beta13)

    def test_origin_stable_for_positive_g_total(self, origin_stable):
        assert equilibrium_eigenvalues(ORIGIN, origin_stable).stable

    def test_hopf_pair_at_inverse_p2(self):
        p = ChuaParams(alpha=10.0, beta=20.0, g0=0.0, I0=-0.7875)
        points = interception_points(p)
        at_hopf = p.with_g_total(points.inv_p2)
        spectrum = equilibrium_eigenvalues(ORIGIN, at_hopf)
        imaginary = [v for v in spectrum.eigenvalues if abs(v.imag) > 1e-6]
        assert len(imaginary) == 2
        for v in imaginary:
            assert abs(v.real) < 1e-8
            assert abs(v.imag) == pytest.approx(points.omega2, rel=1e-8)

    def test_characteristic_polynomial_at_origin(self, beta20):
        k, a, b, g = beta20.g_total, beta20.alpha, beta20.beta, beta20.gamma
        expected = [1.0, 2 * g + k * a, b + k * a, a * b + k * a * b]
        assert np.allclose(characteristic_polynomial(ORIGIN, beta20), expected, rtol=1e-12)

    def test_nearest_equilibrium(self):
        p = ChuaParams(alpha=10.0, beta=13.3, g0=-1.005, I0=0.0003)
        point, distance = nearest_equilibrium(State(5.0, 0.0, -5.0), p)
        assert point.x > 0
        assert distance < 0.2
