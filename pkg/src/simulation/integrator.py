"""
Integrator for HyperChua
Runge-Kutta integration of the Chua state equations and Poincare sectioning
at y = 0 in both crossing directions.

Adaptive methods use scipy's RK45 / DOP853 stepped one accepted step at a
time; RK4 is a fixed-step OdeSolver with cubic Hermite dense output kept for
reproducible golden files.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator, List, Optional, Union

import numpy as np
import pandas as pd
from scipy.integrate import DOP853, RK45, DenseOutput, OdeSolver
from scipy.optimize import brentq

from config.config import CROSSING, INTEGRATOR_DEFAULTS, MODEL_LIMITS, SWEEP_INTEGRATOR
from src.exceptions import DivergedError, StiffnessError
from src.models.chua_model import ChuaParams, Rhs, State, make_rhs

logger = logging.getLogger(__name__)

METHODS = ('RK45', 'DOP853', 'RK4')


@dataclass(frozen=True)
class IntegratorSettings:
    """Integration method, accuracy and time window"""
    method: str = INTEGRATOR_DEFAULTS['method']
    step: float = INTEGRATOR_DEFAULTS['step']
    rtol: float = INTEGRATOR_DEFAULTS['rtol']
    atol: float = INTEGRATOR_DEFAULTS['atol']
    max_step: float = INTEGRATOR_DEFAULTS['max_step']
    t_transient: float = INTEGRATOR_DEFAULTS['t_transient']
    t_sample: float = INTEGRATOR_DEFAULTS['t_sample']
    divergence_radius: float = INTEGRATOR_DEFAULTS['divergence_radius']
    record_interval: Optional[float] = INTEGRATOR_DEFAULTS['record_interval']

    def __post_init__(self):
        errors = []
        if self.method not in METHODS:
            errors.append(f"method must be one of {METHODS}, got '{self.method}'")
        if not self.step > 0:
            errors.append(f"step must be positive, got {self.step}")
        if not 0 < self.rtol <= 1e-2:
            errors.append(f"rtol must lie in (0, 1e-2], got {self.rtol}")
        if not 0 < self.atol <= 1e-2:
            errors.append(f"atol must lie in (0, 1e-2], got {self.atol}")
        if not self.max_step > 0:
            errors.append(f"max_step must be positive, got {self.max_step}")
        if not (self.t_transient >= 0 and math.isfinite(self.t_transient)):
            errors.append(f"t_transient must be finite and >= 0, got {self.t_transient}")
        if not (self.t_sample >= 0 and math.isfinite(self.t_sample)):
            errors.append(f"t_sample must be finite and >= 0, got {self.t_sample}")
        if not self.divergence_radius > 0:
            errors.append(f"divergence_radius must be positive, got {self.divergence_radius}")
        if self.record_interval is not None and not self.record_interval > 0:
            errors.append(f"record_interval must be positive, got {self.record_interval}")
        if errors:
            raise ValueError("; ".join(errors))

    @classmethod
    def for_sweeps(cls, **changes) -> 'IntegratorSettings':
        """Defaults overlaid with SWEEP_INTEGRATOR, then with changes"""
        return cls(**{**SWEEP_INTEGRATOR, **changes})

    @property
    def t_end(self) -> float:
        return self.t_transient + self.t_sample

    def replace(self, **changes) -> 'IntegratorSettings':
        return replace(self, **changes)


@dataclass(frozen=True)
class Trajectory:
    """Recorded solution after the transient: strictly increasing times"""
    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        if self.states.shape != (len(self.times), 3):
            raise ValueError(f"states must have shape ({len(self.times)}, 3), got {self.states.shape}")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("Trajectory times must be strictly increasing")
        if not np.all(np.isfinite(self.states)):
            raise ValueError("Trajectory states must be finite")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final_state(self) -> State:
        return State.from_array(self.states[-1])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'t': self.times, 'x': self.states[:, 0],
                             'y': self.states[:, 1], 'z': self.states[:, 2]})


@dataclass(frozen=True)
class Diverged:
    """Escape of the state beyond the divergence radius (or sinh overflow)"""
    t_escape: float
    state: tuple
    reason: str

    def to_dict(self) -> dict:
        return {'t_escape': self.t_escape, 'state': list(self.state), 'reason': self.reason}


class CrossingDirection(Enum):
    NEG_TO_POS = 'NegToPos'
    POS_TO_NEG = 'PosToNeg'


@dataclass(frozen=True)
class PoincareCrossing:
    """Refined crossing of the plane y = 0"""
    t: float
    state: State
    direction: CrossingDirection

    def __post_init__(self):
        if abs(self.state.y) >= CROSSING['y_tol']:
            raise ValueError(f"Crossing state has |y| = {abs(self.state.y):.3g}")


class PoincareSection(list):
    """List of crossings plus how the run that produced them ended

    truncated is set when fewer than the requested number of crossings were
    found within the time budget.
    """

    def __init__(self, crossings=(), truncated: bool = False,
                 final_state: Optional[State] = None, diverged: Optional[Diverged] = None):
        super().__init__(crossings)
        self.truncated = truncated
        self.final_state = final_state
        self.diverged = diverged

    def x_values(self, direction: Optional[CrossingDirection] = None) -> np.ndarray:
        return np.array([c.state.x for c in self
                         if direction is None or c.direction == direction])

    def times(self, direction: Optional[CrossingDirection] = None) -> np.ndarray:
        return np.array([c.t for c in self
                         if direction is None or c.direction == direction])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            't': [c.t for c in self],
            'x': [c.state.x for c in self],
            'y': [c.state.y for c in self],
            'z': [c.state.z for c in self],
            'direction': [c.direction.value for c in self],
        })


class HermiteDenseOutput(DenseOutput):
    """Cubic Hermite interpolant from end-point values and slopes"""

    def __init__(self, t_old, t, y_old, y, f_old, f):
        super().__init__(t_old, t)
        h = t - t_old
        self.h = h
        self.coeffs = np.column_stack([y_old, h * f_old, y, h * f])

    def _call_impl(self, t):
        s = (np.asarray(t) - self.t_old) / self.h
        s2 = s * s
        s3 = s2 * s
        basis = np.array([2 * s3 - 3 * s2 + 1, s3 - 2 * s2 + s, -2 * s3 + 3 * s2, s3 - s2])
        return self.coeffs @ basis


class FixedStepRK4(OdeSolver):
    """Classical fourth-order Runge-Kutta with a fixed step

    Step n ends at t0 + n*h exactly, so long runs do not accumulate drift.
    """

    def __init__(self, fun, t0, y0, t_bound, step=INTEGRATOR_DEFAULTS['step'],
                 vectorized=False, **extraneous):
        super().__init__(fun, t0, y0, t_bound, vectorized)
        if not step > 0:
            raise ValueError(f"step must be positive, got {step}")
        self.h_fixed = step
        self.t_start = t0
        self.steps_taken = 0
        self.f = self.fun(self.t, self.y)
        self.y_old = None
        self.f_old = None

    def _step_impl(self):
        t, y, f = self.t, self.y, self.f
        n = self.steps_taken + 1
        t_new = self.t_start + self.direction * n * self.h_fixed
        if self.direction * (t_new - self.t_bound) > 0:
            t_new = self.t_bound
        h = t_new - t
        k2 = self.fun(t + h / 2, y + h / 2 * f)
        k3 = self.fun(t + h / 2, y + h / 2 * k2)
        k4 = self.fun(t_new, y + h * k3)
        y_new = y + h / 6 * (f + 2 * k2 + 2 * k3 + k4)

        self.y_old, self.f_old = y, f
        self.t, self.y = t_new, y_new
        self.f = self.fun(t_new, y_new)
        self.steps_taken = n
        return True, None

    def _dense_output_impl(self):
        return HermiteDenseOutput(self.t_old, self.t, self.y_old, self.y, self.f_old, self.f)


def make_solver(rhs: Rhs, t0: float, y0: np.ndarray, t_bound: float,
                cfg: IntegratorSettings) -> OdeSolver:
    """OdeSolver instance for the configured method"""
    y0 = np.asarray(y0, dtype=float)
    if cfg.method == 'RK4':
        return FixedStepRK4(rhs, t0, y0, t_bound, step=cfg.step)
    solver_class = RK45 if cfg.method == 'RK45' else DOP853
    return solver_class(rhs, t0, y0, t_bound, rtol=cfg.rtol, atol=cfg.atol,
                        max_step=cfg.max_step)


def accepted_steps(solver: OdeSolver, divergence_radius: float) -> Iterator[OdeSolver]:
    """Advance the solver, yielding it after every accepted step

    A state past MODEL_LIMITS['blowup_x'] that still moves outward is a
    sinh runaway, which otherwise ends in step size underflow long before
    the divergence radius is reached.

    Raises:
        DivergedError: if the state leaves the divergence radius, runs away
            past the blow-up bound or the right-hand side overflows
        StiffnessError: if the adaptive step size underflows on a bounded state
    """
    blowup = MODEL_LIMITS['blowup_x']
    while solver.status == 'running':
        message = solver.step()
        state = solver.y[:3]
        if solver.status == 'failed':
            if abs(state[0]) > blowup:
                raise DivergedError(f"Finite-time blow-up at t = {solver.t:.6g}: {message} "
                                    f"with |x| = {abs(state[0]):.6g}", t=solver.t, state=state)
            raise StiffnessError(f"Integration failed at t = {solver.t:.6g}: {message}",
                                 t=solver.t, state=state)
        norm = math.sqrt(float(state @ state))
        if not norm <= divergence_radius:
            raise DivergedError(f"State norm {norm:.6g} exceeded the divergence radius "
                                f"{divergence_radius:g}", t=solver.t, state=state)
        if abs(state[0]) > blowup and _moving_outward(solver):
            raise DivergedError(f"Finite-time blow-up at t = {solver.t:.6g}: x = {state[0]:.6g} "
                                f"still growing", t=solver.t, state=state)
        yield solver


def _moving_outward(solver: OdeSolver) -> bool:
    slope = getattr(solver, 'f', None)
    if slope is None:
        return True
    return float(solver.y[0]) * float(slope[0]) > 0.0


def _diverged(error: DivergedError, solver: OdeSolver) -> Diverged:
    t = solver.t if error.t is None else error.t
    state = solver.y[:3] if error.state is None else error.state
    return Diverged(t_escape=float(t), state=tuple(float(v) for v in state), reason=str(error))


def _initial_escape(s0: State, cfg: IntegratorSettings) -> Optional[Diverged]:
    if s0.norm() > cfg.divergence_radius or abs(s0.x) > MODEL_LIMITS['sinh_overflow']:
        return Diverged(t_escape=0.0, state=tuple(s0), reason="Initial state outside the divergence bounds")
    return None


def integrate(s0: State, p: ChuaParams,
              cfg: Optional[IntegratorSettings] = None) -> Union[Trajectory, Diverged]:
    """Integrate over [0, t_transient + t_sample] and record after t_transient

    Args:
        s0: Initial state
        p: Model parameters
        cfg: Integrator settings (defaults from config)

    Returns:
        Trajectory of the recorded window, or Diverged with the escape time
    """
    cfg = cfg or IntegratorSettings()
    escape = _initial_escape(s0, cfg)
    if escape is not None:
        return escape
    solver = make_solver(make_rhs(p), 0.0, s0.as_array(), cfg.t_end, cfg)
    t_start = cfg.t_transient
    times: List[float] = []
    states: List[np.ndarray] = []

    if t_start == 0.0:
        times.append(0.0)
        states.append(solver.y.copy())
    next_sample = t_start + cfg.record_interval if cfg.record_interval else None

    try:
        for step in accepted_steps(solver, cfg.divergence_radius):
            t_new = step.t
            if t_new < t_start:
                continue
            dense = None
            if not times:
                dense = step.dense_output()
                times.append(t_start)
                states.append(np.asarray(dense(t_start), dtype=float))
            if cfg.record_interval:
                dense = dense or step.dense_output()
                while next_sample <= t_new:
                    times.append(next_sample)
                    states.append(np.asarray(dense(next_sample), dtype=float))
                    next_sample = t_start + (len(times)) * cfg.record_interval
            elif t_new > times[-1]:
                times.append(t_new)
                states.append(step.y.copy())
    except DivergedError as error:
        result = _diverged(error, solver)
        logger.debug(f"Trajectory diverged at t = {result.t_escape:.6g}")
        return result

    return Trajectory(times=np.array(times), states=np.array(states).reshape(-1, 3))


def _refine_crossing(step: OdeSolver) -> Optional[PoincareCrossing]:
    """Locate y = 0 inside the last accepted step from its dense output"""
    g_old = float(step.y_old[1])
    g_new = float(step.y[1])
    if g_old < 0.0 <= g_new:
        direction = CrossingDirection.NEG_TO_POS
    elif g_old > 0.0 >= g_new:
        direction = CrossingDirection.POS_TO_NEG
    else:
        return None

    dense = step.dense_output()
    t_old, t_new = step.t_old, step.t

    def y_at(t: float) -> float:
        return float(dense(t)[1])

    a, b = y_at(t_old), y_at(t_new)
    if g_new == 0.0:
        t_cross = t_new
    elif a * b < 0.0:
        t_cross = brentq(y_at, t_old, t_new, xtol=CROSSING['time_tol'])
    else:
        # interpolant and step end disagree in sign by rounding
        t_cross = t_old if abs(a) < abs(b) else t_new
    point = np.asarray(dense(t_cross), dtype=float)
    if abs(point[1]) >= CROSSING['y_tol']:
        logger.warning(f"Crossing refinement left |y| = {abs(point[1]):.3g} at t = {t_cross:.12g}")
    return PoincareCrossing(t=float(t_cross), state=State(point[0], 0.0, point[2]),
                            direction=direction)


def poincare_crossings(s0: State, p: ChuaParams, cfg: Optional[IntegratorSettings] = None,
                       max_crossings: Optional[int] = None) -> PoincareSection:
    """Post-transient crossings of y = 0 in both directions

    Each sign change of y between accepted steps is refined by root finding on
    the dense output. When max_crossings is given, integration stops once that
    many are found; a shorter list within the time budget is flagged truncated.
    """
    cfg = cfg or IntegratorSettings()
    escape = _initial_escape(s0, cfg)
    if escape is not None:
        return PoincareSection(truncated=max_crossings is not None, diverged=escape)
    solver = make_solver(make_rhs(p), 0.0, s0.as_array(), cfg.t_end, cfg)
    crossings: List[PoincareCrossing] = []
    diverged = None

    try:
        for step in accepted_steps(solver, cfg.divergence_radius):
            if step.t < cfg.t_transient:
                continue
            crossing = _refine_crossing(step)
            if crossing is None or crossing.t < cfg.t_transient:
                continue
            crossings.append(crossing)
            if max_crossings is not None and len(crossings) >= max_crossings:
                break
    except DivergedError as error:
        diverged = _diverged(error, solver)
        logger.debug(f"Sectioned trajectory diverged at t = {diverged.t_escape:.6g}")

    final_state = None if diverged else State.from_array(solver.y[:3])
    truncated = max_crossings is not None and len(crossings) < max_crossings
    return PoincareSection(crossings, truncated=truncated, final_state=final_state,
                           diverged=diverged)
