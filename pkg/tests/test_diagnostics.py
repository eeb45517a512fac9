"""Tests for the Lyapunov spectrum, attractor classifier and dominant frequency"""

import math

import numpy as np
import pytest

from src.analysis.diagnostics import (CHAOTIC, DIVERGED, FIXED_POINT, UNDECIDED,
                                      AttractorClass, AttractorKind, LyapunovResult,
                                      classify_attractor, cluster_count,
                                      dominant_frequency, evaluate_point,
                                      lyapunov_spectrum, periodic)
from src.exceptions import DivergedError, InsufficientCrossingsError
from src.models.chua_model import State, equilibria, equilibrium_eigenvalues
from src.simulation.integrator import (CrossingDirection, Diverged, IntegratorSettings,
                                       PoincareCrossing, PoincareSection)

UP = CrossingDirection.NEG_TO_POS
DOWN = CrossingDirection.POS_TO_NEG


def crossing(t, x, direction=UP):
    return PoincareCrossing(t=t, state=State(x, 0.0, -x), direction=direction)


def spectrum(*exponents, distance=math.inf):
    return LyapunovResult(exponents=exponents, converged=True, t_used=100.0,
                          equilibrium_distance=distance)


class TestAttractorClass:
    @pytest.mark.parametrize('label', ['FixedPoint', 'Periodic(3)', 'Chaotic',
                                       'Diverged', 'Undecided'])
    def test_parse_label(self, label):
        assert AttractorClass.parse(label).label == label

    def test_period_only_for_periodic(self):
        with pytest.raises(ValueError):
            AttractorClass(AttractorKind.CHAOTIC, 2)
        with pytest.raises(ValueError):
            AttractorClass(AttractorKind.PERIODIC)

    def test_exponents_must_be_sorted(self):
        with pytest.raises(ValueError):
            LyapunovResult(exponents=(-1.0, 0.0, -3.0), converged=True, t_used=1.0)


class TestClassifier:
    def test_diverged_first(self):
        section = PoincareSection(diverged=Diverged(1.0, (800.0, 0.0, 0.0), 'escape'))
        assert classify_attractor(section, spectrum(0.5, 0.0, -10.0)) == DIVERGED

    def test_undecided_without_spectrum(self):
        assert classify_attractor([crossing(1.0, 0.5)], None) == UNDECIDED

    def test_fixed_point_at_equilibrium(self):
        assert classify_attractor([], spectrum(0.0, -0.5, -10.0, distance=1e-9)) == FIXED_POINT

    def test_fixed_point_while_contracting(self):
        assert classify_attractor([crossing(1.0, 0.2)], spectrum(-0.1, -0.1, -15.0)) == FIXED_POINT

    def test_chaotic(self):
        crossings = [crossing(t, x) for t, x in ((1.0, 0.3), (2.0, 1.7), (3.0, 0.9))]
        assert classify_attractor(crossings, spectrum(0.2, 0.0, -12.0)) == CHAOTIC

    def test_periodic_counts_clusters_per_direction(self):
        crossings = []
        for k in range(6):
            crossings.append(crossing(2.0 * k, 1.0 if k % 2 else 2.0, UP))
            crossings.append(crossing(2.0 * k + 1.0, -1.5, DOWN))
        assert classify_attractor(crossings, spectrum(0.001, -0.4, -10.0)) == periodic(2)

    def test_thresholds_override(self):
        crossings = [crossing(1.0, 0.5), crossing(2.0, 0.5)]
        lyap = spectrum(0.02, 0.0, -10.0)
        assert classify_attractor(crossings, lyap) == CHAOTIC
        loose = {'chaos_threshold': 0.05, 'periodic_threshold': 0.03}
        assert classify_attractor(crossings, lyap, loose) == periodic(1)

    def test_between_thresholds_is_undecided(self):
        crossings = [crossing(1.0, 0.5)]
        assert classify_attractor(crossings, spectrum(0.008, 0.0, -10.0)) == UNDECIDED

    def test_cluster_count(self):
        assert cluster_count([], 1e-3) == 0
        assert cluster_count([1.0, 1.0005, 2.0, 2.0002, 3.0], 1e-3) == 3


class TestDominantFrequency:
    def test_regular_crossings(self):
        period = 1.8
        crossings = [crossing(period * k, 0.7) for k in range(8)]
        crossings += [crossing(period * k + 0.9, -0.7, DOWN) for k in range(7)]
        assert dominant_frequency(crossings) == pytest.approx(2 * math.pi / period, rel=1e-12)

    def test_trims_to_whole_periods(self):
        crossings = [crossing(float(k), 0.7 if k % 2 else 0.9) for k in range(8)]
        assert dominant_frequency(crossings, period=2) == pytest.approx(2 * math.pi, rel=1e-12)

    def test_needs_four_crossings(self):
        with pytest.raises(InsufficientCrossingsError):
            dominant_frequency([crossing(float(k), 0.7) for k in range(3)])


class TestLyapunovSpectrum:
    def test_stable_origin(self, origin_stable, quick):
        result = lyapunov_spectrum(State(0.01, 0.0, 0.0), origin_stable, quick)
        assert result.largest < 0.0
        assert result.total == pytest.approx(result.trace_mean, abs=0.02)
        assert result.trace_mean == pytest.approx(-16.0, abs=1e-3)

    def test_random_frame_gives_same_sum(self, origin_stable, quick):
        identity = lyapunov_spectrum(State(0.01, 0.0, 0.0), origin_stable, quick)
        rotated = lyapunov_spectrum(State(0.01, 0.0, 0.0), origin_stable, quick, seed=3)
        assert rotated.total == pytest.approx(identity.total, abs=0.02)

    def test_divergence_raises(self, divergent, quick):
        with pytest.raises(DivergedError):
            lyapunov_spectrum(State(5.0, 0.0, 0.0), divergent, quick)

    def test_rejects_empty_window(self, origin_stable):
        with pytest.raises(ValueError):
            lyapunov_spectrum(State(0.01, 0.0, 0.0), origin_stable,
                              IntegratorSettings(t_transient=0.0, t_sample=0.0))


class TestEvaluatePoint:
    def test_stable_origin(self, origin_stable, quick):
        result = evaluate_point(origin_stable, State(0.01, 0.0, 0.0), quick, lyapunov_time=20.0)
        assert result.attractor == FIXED_POINT
        assert result.error is None

    def test_divergent(self, divergent, quick):
        result = evaluate_point(divergent, State(5.0, 0.0, 0.0), quick, lyapunov_time=20.0)
        assert result.attractor == DIVERGED
        assert result.final_state is None
        assert result.error

    def test_runaway_near_origin_is_diverged(self, beta20):
        p = beta20.replace(g_total=-0.5)
        cfg = IntegratorSettings(t_transient=100.0, t_sample=100.0)
        result = evaluate_point(p, State(0.01, 0.0, 0.0), cfg, lyapunov_time=20.0)
        assert result.attractor == DIVERGED
        assert 'blow-up' in result.error

    @pytest.mark.slow
    def test_omega2_cycle_is_periodic(self, regimes):
        p = regimes.get_params('omega2_cycle')
        cfg = IntegratorSettings(rtol=1e-9, atol=1e-12, t_transient=200.0, t_sample=60.0)
        result = evaluate_point(p, State(0.1, 0.0, 0.0), cfg, lyapunov_time=400.0)
        assert result.attractor == periodic(1)
        omega = dominant_frequency(result.crossings)
        assert omega == pytest.approx(3.3613, rel=0.1)


@pytest.mark.slow
class TestChaoticRegimes:
    def test_double_scroll(self, regimes):
        p = regimes.get_params('double_scroll')
        result = evaluate_point(p, State(0.1, 0.0, 0.0), IntegratorSettings(), lyapunov_time=500.0)
        assert result.attractor == CHAOTIC
        lyap = result.lyapunov
        assert lyap.converged
        assert lyap.largest > 0.02
        assert abs(lyap.total - lyap.trace_mean) < 0.02
        assert lyap.exponents[2] < 0.0

    def test_double_scroll_is_sign_symmetric(self, regimes):
        p = regimes.get_params('double_scroll')
        result = evaluate_point(p, State(0.1, 0.0, 0.0), IntegratorSettings(), lyapunov_time=500.0)
        assert result.lyapunov.largest > 0.02
        assert abs(result.lyapunov.exponents[1]) < 0.01
        xs = np.array([c.state.x for c in result.crossings])
        positive, negative = xs[xs > 0.0], xs[xs < 0.0]
        assert min(len(positive), len(negative)) >= 0.2 * len(xs)
        assert positive.max() == pytest.approx(-negative.min(), rel=0.15)

    def test_merged_scroll(self, regimes):
        p = regimes.get_params('merged_scroll')
        result = evaluate_point(p, State(0.1, 0.0, 0.0), IntegratorSettings(), lyapunov_time=500.0)
        assert result.attractor == CHAOTIC


@pytest.mark.slow
class TestRegularRegimes:
    def test_cycle_has_zero_and_negative_exponents(self, regimes):
        p = regimes.get_params('omega2_cycle')
        result = evaluate_point(p, State(0.1, 0.0, 0.0), IntegratorSettings(),
                                lyapunov_time=1000.0)
        largest, second, third = result.lyapunov.exponents
        assert abs(largest) < 0.005
        assert second < 0.0
        assert third < 0.0

    def test_period_two(self, regimes):
        p = regimes.get_params('period_two')
        result = evaluate_point(p, State(0.1, 0.0, 0.0), IntegratorSettings(), lyapunov_time=400.0)
        assert result.attractor == periodic(2)

    def test_exponents_at_equilibrium_match_eigenvalues(self, regimes):
        p = regimes.get_params('equilibria_pm')
        p1 = equilibria(p)[1]
        real_parts = sorted(equilibrium_eigenvalues(p1, p).eigenvalues.real, reverse=True)
        result = lyapunov_spectrum(p1, p, IntegratorSettings(t_transient=0.0, t_sample=1000.0))
        assert list(result.exponents) == pytest.approx(real_parts, abs=0.01)
