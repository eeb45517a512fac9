"""
Attractor Diagnostics for HyperChua
Lyapunov spectrum by tangent-flow integration with periodic QR
re-orthonormalization, dominant oscillation frequency from Poincare
crossings, and the qualitative attractor classifier used by the sweeps.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence

import numpy as np

from config.config import CLASSIFIER, LYAPUNOV, SWEEP_DEFAULTS
from src.exceptions import (ChuaError, DivergedError, InsufficientCrossingsError,
                            StiffnessError)
from src.models.chua_model import (ChuaParams, State, make_tangent_rhs,
                                   nearest_equilibrium)
from src.simulation.integrator import (CrossingDirection, Diverged,
                                       IntegratorSettings, PoincareCrossing,
                                       PoincareSection, accepted_steps,
                                       integrate, make_solver, poincare_crossings)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LyapunovResult:
    """Lyapunov exponents sorted descending, per unit dimensionless time

    trace_mean is the time average of trace(J) along the same run, so that
    sum(exponents) ~ trace_mean.
    """
    exponents: tuple
    converged: bool
    t_used: float
    trace_mean: float = math.nan
    final_state: Optional[State] = None
    equilibrium_distance: float = math.inf

    def __post_init__(self):
        if len(self.exponents) != 3:
            raise ValueError(f"Expected 3 exponents, got {len(self.exponents)}")
        if list(self.exponents) != sorted(self.exponents, reverse=True):
            raise ValueError("Exponents must be sorted in descending order")

    @property
    def largest(self) -> float:
        return self.exponents[0]

    @property
    def total(self) -> float:
        return float(sum(self.exponents))

    def to_dict(self) -> Dict:
        return {'exponents': list(self.exponents), 'converged': self.converged,
                't_used': self.t_used, 'trace_mean': self.trace_mean}


class AttractorKind(Enum):
    FIXED_POINT = 'FixedPoint'
    PERIODIC = 'Periodic'
    CHAOTIC = 'Chaotic'
    DIVERGED = 'Diverged'
    UNDECIDED = 'Undecided'


@dataclass(frozen=True)
class AttractorClass:
    """Qualitative class; period counts crossings per period per direction"""
    kind: AttractorKind
    period: Optional[int] = None

    def __post_init__(self):
        if self.kind == AttractorKind.PERIODIC:
            if self.period is None or self.period < 1:
                raise ValueError(f"Periodic class needs period >= 1, got {self.period}")
        elif self.period is not None:
            raise ValueError(f"{self.kind.value} carries no period")

    @property
    def label(self) -> str:
        if self.kind == AttractorKind.PERIODIC:
            return f'Periodic({self.period})'
        return self.kind.value

    def __str__(self) -> str:
        return self.label

    @classmethod
    def parse(cls, label: str) -> 'AttractorClass':
        if label.startswith('Periodic(') and label.endswith(')'):
            return cls(AttractorKind.PERIODIC, int(label[len('Periodic('):-1]))
        return cls(AttractorKind(label))


FIXED_POINT = AttractorClass(AttractorKind.FIXED_POINT)
CHAOTIC = AttractorClass(AttractorKind.CHAOTIC)
DIVERGED = AttractorClass(AttractorKind.DIVERGED)
UNDECIDED = AttractorClass(AttractorKind.UNDECIDED)


def periodic(n: int) -> AttractorClass:
    return AttractorClass(AttractorKind.PERIODIC, n)


@dataclass(frozen=True)
class PointEvaluation:
    """Outcome of integrate -> crossings -> Lyapunov -> classify at one point"""
    attractor: AttractorClass
    crossings: PoincareSection
    lyapunov: Optional[LyapunovResult]
    final_state: Optional[State]
    error: Optional[str] = None


def _random_frame(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    return q * np.sign(np.diag(r))


def lyapunov_spectrum(s0: State, p: ChuaParams, cfg: Optional[IntegratorSettings] = None,
                      renorm_interval: Optional[float] = None,
                      seed: Optional[int] = None) -> LyapunovResult:
    """Lyapunov spectrum by the standard tangent-flow (QR) method

    The state is first integrated over cfg.t_transient; then state and an
    orthonormal frame evolve jointly over cfg.t_sample, re-orthonormalized
    every renorm_interval with the log stretch factors accumulated.

    Args:
        s0: Initial state
        p: Model parameters
        cfg: Integrator settings; t_sample is the averaging time
        renorm_interval: Time between QR steps (config default 1.0)
        seed: Seed of a random initial frame; identity frame when None

    Returns:
        LyapunovResult; converged is False when a bounded non-equilibrium run
        shows no exponent within the flow tolerance of zero

    Raises:
        DivergedError: if the trajectory escapes
    """
    cfg = cfg or IntegratorSettings()
    interval = renorm_interval or LYAPUNOV['renorm_interval']
    if not interval > 0:
        raise ValueError(f"renorm_interval must be positive, got {interval}")
    if not cfg.t_sample > 0:
        raise ValueError("t_sample must be positive to average stretch factors")

    state = s0
    if cfg.t_transient > 0.0:
        settled = integrate(s0, p, cfg.replace(t_sample=0.0, record_interval=None))
        if isinstance(settled, Diverged):
            raise DivergedError(settled.reason, t=settled.t_escape, state=settled.state)
        state = settled.final_state

    rhs = make_tangent_rhs(p)
    frame = np.eye(3) if seed is None else _random_frame(seed)
    log_stretch = np.zeros(3)
    trace_integral = 0.0
    t = 0.0
    y = np.concatenate([state.as_array(), frame.ravel(), [0.0]])

    while t < cfg.t_sample:
        t_next = min(t + interval, cfg.t_sample)
        solver = make_solver(rhs, t, y, t_next, cfg)
        for _ in accepted_steps(solver, cfg.divergence_radius):
            pass
        y = solver.y.copy()
        q, r = np.linalg.qr(y[3:12].reshape(3, 3))
        signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
        q = q * signs
        stretch = np.abs(np.diag(r))
        if np.any(stretch == 0.0):
            raise DivergedError("Tangent frame collapsed", t=t_next, state=y[:3])
        log_stretch += np.log(stretch)
        trace_integral += y[12]
        y[3:12] = q.ravel()
        y[12] = 0.0
        t = t_next

    t_used = cfg.t_sample
    exponents = tuple(sorted((float(v) for v in log_stretch / t_used), reverse=True))
    final_state = State.from_array(y[:3])
    _, distance = nearest_equilibrium(final_state, p)

    if distance < CLASSIFIER['fixed_point_tol']:
        converged = all(math.isfinite(v) for v in exponents)
    else:
        converged = min(abs(v) for v in exponents) < LYAPUNOV['flow_exponent_tol']
    if not converged:
        logger.debug(f"Lyapunov spectrum not converged: {exponents}")

    return LyapunovResult(exponents=exponents, converged=converged, t_used=t_used,
                          trace_mean=trace_integral / t_used, final_state=final_state,
                          equilibrium_distance=distance)


def cluster_count(values: Sequence[float], radius: float) -> int:
    """Number of groups after splitting sorted values at gaps wider than radius"""
    if len(values) == 0:
        return 0
    ordered = np.sort(np.asarray(values, dtype=float))
    return int(np.count_nonzero(np.diff(ordered) > radius)) + 1


def classify_attractor(crossings: Sequence[PoincareCrossing], lyap: Optional[LyapunovResult],
                       thresholds: Optional[Dict] = None) -> AttractorClass:
    """Qualitative class of one run from its crossings and Lyapunov spectrum

    Rules in order: Diverged; FixedPoint when the run ended within the
    fixed-point tolerance of an equilibrium and the crossings (if any) have
    collapsed, or when the largest exponent is below minus the chaos
    threshold; Chaotic when it exceeds the chaos threshold; Periodic(n) when it is at most the periodic threshold and the
    crossing x-values form n clusters per direction; Undecided otherwise.
    """
    limits = dict(CLASSIFIER)
    limits.update(thresholds or {})
    radius = limits['cluster_radius']

    if getattr(crossings, 'diverged', None) is not None:
        return DIVERGED
    if lyap is None:
        return UNDECIDED

    by_direction = {
        direction: [c.state.x for c in crossings if c.direction == direction]
        for direction in CrossingDirection
    }
    collapsed = all(len(xs) == 0 or max(xs) - min(xs) < radius for xs in by_direction.values())
    if lyap.equilibrium_distance < limits['fixed_point_tol'] and collapsed:
        return FIXED_POINT
    # no zero exponent: still contracting onto an equilibrium
    if lyap.largest < -limits['chaos_threshold']:
        return FIXED_POINT

    if lyap.largest > limits['chaos_threshold']:
        return CHAOTIC

    if lyap.largest <= limits['periodic_threshold'] and len(crossings) > 0:
        n = max(cluster_count(xs, radius) for xs in by_direction.values())
        if 1 <= n <= limits['max_period']:
            return periodic(n)
    return UNDECIDED


def dominant_frequency(crossings: Sequence[PoincareCrossing], period: int = 1) -> float:
    """Angular frequency of the oscillation from same-direction crossing times

    Uses the direction with more crossings and 2*pi*m/(t_last - t_first) over
    m intervals, trimmed to a whole number of periods of a Periodic(period) orbit.

    Raises:
        InsufficientCrossingsError: with fewer than 4 same-direction crossings
    """
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    times = {direction: sorted(c.t for c in crossings if c.direction == direction)
             for direction in CrossingDirection}
    chosen = max(times.values(), key=len)
    if len(chosen) < 4:
        raise InsufficientCrossingsError(
            f"Need at least 4 same-direction crossings, got {len(chosen)}")
    intervals = len(chosen) - 1
    intervals -= intervals % period
    if intervals == 0:
        raise InsufficientCrossingsError(f"Fewer crossings than one period of {period}")
    return 2.0 * math.pi * intervals / (chosen[intervals] - chosen[0])


def evaluate_point(p: ChuaParams, s0: State, cfg: Optional[IntegratorSettings] = None,
                   lyapunov_time: Optional[float] = None,
                   thresholds: Optional[Dict] = None) -> PointEvaluation:
    """Integrate, section, measure and classify one (parameters, state) pair

    Never raises on numerical trouble; failures become Diverged or Undecided
    with the message in PointEvaluation.error.
    """
    cfg = cfg or IntegratorSettings()
    lyapunov_time = lyapunov_time or SWEEP_DEFAULTS['lyapunov_time']
    try:
        section = poincare_crossings(s0, p, cfg)
    except StiffnessError as error:
        logger.warning(f"Stiff integration at {p}: {error}")
        return PointEvaluation(UNDECIDED, PoincareSection(), None, None, str(error))

    if section.diverged is not None:
        return PointEvaluation(DIVERGED, section, None, None, section.diverged.reason)

    try:
        lyap = lyapunov_spectrum(section.final_state, p,
                                 cfg.replace(t_transient=0.0, t_sample=lyapunov_time))
    except DivergedError as error:
        return PointEvaluation(DIVERGED, section, None, None, str(error))
    except ChuaError as error:
        logger.warning(f"Lyapunov spectrum failed at {p}: {error}")
        return PointEvaluation(UNDECIDED, section, None, section.final_state, str(error))

    attractor = classify_attractor(section, lyap, thresholds)
    return PointEvaluation(attractor, section, lyap, lyap.final_state)
