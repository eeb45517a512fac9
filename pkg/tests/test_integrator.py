"""Tests for trajectory integration, divergence detection and the y = 0 section"""

import numpy as np
import pytest

from config.config import MODEL_LIMITS
from src.models.chua_model import ORIGIN, State
from src.simulation.integrator import (CrossingDirection, Diverged, IntegratorSettings,
                                       PoincareCrossing, Trajectory, integrate,
                                       poincare_crossings)


class TestSettings:
    def test_defaults(self):
        cfg = IntegratorSettings()
        assert cfg.method == 'RK45'
        assert cfg.t_end == 1000.0

    def test_collects_every_error(self):
        with pytest.raises(ValueError) as info:
            IntegratorSettings(method='Euler', rtol=0.0, t_sample=-1.0)
        message = str(info.value)
        assert 'method' in message and 'rtol' in message and 't_sample' in message

    def test_trajectory_rejects_unordered_times(self):
        with pytest.raises(ValueError):
            Trajectory(times=np.array([0.0, 0.0]), states=np.zeros((2, 3)))


class TestIntegrate:
    def test_origin_stays_put(self, beta13, quick):
        result = integrate(ORIGIN, beta13, quick.replace(t_transient=0.0))
        assert isinstance(result, Trajectory)
        assert np.all(result.states == 0.0)

    def test_records_only_after_transient(self, beta13, quick):
        result = integrate(State(0.1, 0.0, 0.0), beta13, quick)
        assert result.times[0] == quick.t_transient
        assert result.times[-1] == pytest.approx(quick.t_end)
        assert np.all(np.diff(result.times) > 0)

    def test_record_interval_grid(self, beta13, quick):
        cfg = quick.replace(record_interval=0.5)
        result = integrate(State(0.1, 0.0, 0.0), beta13, cfg)
        expected = quick.t_transient + 0.5 * np.arange(len(result))
        assert np.array_equal(result.times, expected)
        assert len(result) == 41

    def test_reflected_initial_state_gives_reflected_trajectory(self, beta20, quick):
        s0 = State(0.3, -0.1, 0.2)
        forward = integrate(s0, beta20, quick)
        mirrored = integrate(-s0, beta20, quick)
        assert np.array_equal(forward.times, mirrored.times)
        assert np.allclose(mirrored.states, -forward.states, rtol=0, atol=1e-9)

    def test_fixed_step_matches_adaptive(self, beta20):
        s0 = State(0.3, -0.1, 0.2)
        adaptive = integrate(s0, beta20, IntegratorSettings(t_transient=5.0, t_sample=0.0))
        fixed = integrate(s0, beta20, IntegratorSettings(method='RK4', step=1e-3,
                                                         t_transient=5.0, t_sample=0.0))
        assert np.allclose(fixed.final_state.as_array(), adaptive.final_state.as_array(),
                           atol=1e-6)

    def test_fixed_step_lands_on_grid(self, beta20):
        cfg = IntegratorSettings(method='RK4', step=0.25, t_transient=0.0, t_sample=2.0)
        result = integrate(State(0.3, 0.0, 0.0), beta20, cfg)
        assert np.array_equal(result.times, 0.25 * np.arange(9))

    def test_divergence_is_reported(self, divergent, quick):
        result = integrate(State(5.0, 0.0, 0.0), divergent, quick)
        assert isinstance(result, Diverged)
        assert 0.0 < result.t_escape < quick.t_end

    def test_initial_escape(self, beta13):
        result = integrate(State(800.0, 0.0, 0.0), beta13)
        assert isinstance(result, Diverged)
        assert result.t_escape == 0.0
        assert result.to_dict()['state'] == [800.0, 0.0, 0.0]

    def test_sinh_runaway_is_divergence_not_stiffness(self, beta20):
        # g0 + I0 = -0.5 lies past the outer cycle: the trajectory escapes in finite time
        p = beta20.replace(g_total=-0.5)
        cfg = IntegratorSettings(t_transient=0.0, t_sample=200.0)
        result = integrate(State(0.01, 0.0, 0.0), p, cfg)
        assert isinstance(result, Diverged)
        assert 0.0 < result.t_escape < 200.0
        assert abs(result.state[0]) > MODEL_LIMITS['blowup_x']
        assert 'blow-up' in result.reason


class TestPoincareCrossings:
    def test_cycle_crossings(self, regimes):
        p = regimes.get_params('omega2_cycle')
        cfg = IntegratorSettings(rtol=1e-9, atol=1e-12, t_transient=100.0, t_sample=30.0)
        section = poincare_crossings(State(0.1, 0.0, 0.0), p, cfg)
        assert len(section) >= 4
        assert not section.truncated and section.diverged is None
        assert all(c.state.y == 0.0 for c in section)
        assert all(c.t >= cfg.t_transient for c in section)
        directions = [c.direction for c in section]
        assert all(a != b for a, b in zip(directions, directions[1:]))

    def test_max_crossings_stops_early(self, regimes):
        p = regimes.get_params('omega2_cycle')
        cfg = IntegratorSettings(t_transient=20.0, t_sample=100.0)
        section = poincare_crossings(State(0.1, 0.0, 0.0), p, cfg, max_crossings=3)
        assert len(section) == 3
        assert not section.truncated

    def test_truncated_when_budget_runs_out(self, origin_stable, quick):
        section = poincare_crossings(ORIGIN, origin_stable, quick, max_crossings=5)
        assert len(section) == 0
        assert section.truncated
        assert section.final_state == ORIGIN

    def test_divergence(self, divergent, quick):
        section = poincare_crossings(State(5.0, 0.0, 0.0), divergent, quick)
        assert section.diverged is not None
        assert section.final_state is None

    def test_frame_columns(self, regimes):
        p = regimes.get_params('omega2_cycle')
        cfg = IntegratorSettings(t_transient=20.0, t_sample=10.0)
        frame = poincare_crossings(State(0.1, 0.0, 0.0), p, cfg).to_frame()
        assert list(frame.columns) == ['t', 'x', 'y', 'z', 'direction']
        assert set(frame['direction']) <= {'NegToPos', 'PosToNeg'}

    def test_crossing_must_lie_on_section(self):
        with pytest.raises(ValueError):
            PoincareCrossing(t=1.0, state=State(1.0, 0.1, 0.0),
                             direction=CrossingDirection.NEG_TO_POS)
