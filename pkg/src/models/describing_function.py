"""
Describing Function Analysis for HyperChua
Frequency response G(j*omega) of the linear filter, the describing function
N(X) of the sinh nonlinearity, real-axis interception points of the Nyquist
diagram, harmonic-balance limit-cycle prediction and the analytic region
classifier for alpha < beta < gamma**2.

Harmonic balance convention: a cycle of amplitude X and frequency omega
exists where -1/N(X) = G(j*omega).
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import integrate, special
from scipy.optimize import brentq

from config.config import DESCRIBING_FUNCTION
from src.exceptions import (ContractViolationError, DivergedError,
                            LocusDiscontinuityError, PoleOnAxisError)
from src.models.chua_model import ChuaParams, State

logger = logging.getLogger(__name__)

DF_METHODS = ('series', 'bessel', 'quadrature')


@dataclass(frozen=True)
class ComplexPoint:
    """Point of the complex plane, e.g. a value of G(j*omega)"""
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"Non-finite complex point ({self.re}, {self.im})")

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def conjugate(self) -> 'ComplexPoint':
        return ComplexPoint(self.re, -self.im)


@dataclass(frozen=True)
class InterceptionSet:
    """Real-axis crossings of the Nyquist diagram

    Index 0 is omega = +-infinity (p0 = 0), flagged by omega0_infinite instead
    of storing a float infinity; index 1 is omega = 0 (p1 = -1). Entries 2 and
    3 are None when the corresponding crossing does not exist.
    """
    omega: Tuple[Optional[float], Optional[float], Optional[float], Optional[float]]
    p: Tuple[float, float, Optional[float], Optional[float]]
    exists: Tuple[bool, bool, bool, bool]
    omega0_infinite: bool = True

    @property
    def omega2(self) -> Optional[float]:
        return self.omega[2]

    @property
    def omega3(self) -> Optional[float]:
        return self.omega[3]

    @property
    def p2(self) -> Optional[float]:
        return self.p[2]

    @property
    def p3(self) -> Optional[float]:
        return self.p[3]

    @property
    def inv_p2(self) -> Optional[float]:
        return None if self.p[2] is None else 1.0 / self.p[2]

    @property
    def inv_p3(self) -> Optional[float]:
        return None if self.p[3] is None else 1.0 / self.p[3]

    def to_dict(self) -> Dict:
        return {
            'omega0': '+-inf', 'omega1': self.omega[1],
            'omega2': self.omega[2], 'omega3': self.omega[3],
            'p0': self.p[0], 'p1': self.p[1], 'p2': self.p[2], 'p3': self.p[3],
            'inv_p1': -1.0, 'inv_p2': self.inv_p2, 'inv_p3': self.inv_p3,
            'exists': list(self.exists),
        }


class Behavior(Enum):
    """Qualitative behaviors the analytic classifier can predict"""
    ORIGIN = 'Origin'
    EQUILIBRIA_PM = 'EquilibriaPm'
    CYCLE_OMEGA2_TO_CHAOS = 'CycleOmega2ToChaos'
    CYCLE_OMEGA3 = 'CycleOmega3'
    UNSTABLE = 'Unstable'


_BEHAVIOR_ORDER = list(Behavior)


@dataclass(frozen=True)
class RegionLabel:
    """Set of coexisting behaviors, or a boundary / out-of-range marker"""
    behaviors: FrozenSet[Behavior] = frozenset()
    boundary: Optional[str] = None
    out_of_range: bool = False

    def __post_init__(self):
        markers = int(self.boundary is not None) + int(self.out_of_range)
        if markers > 1 or (markers == 0 and not self.behaviors):
            raise ValueError("A region label is a non-empty behavior set or exactly one marker")
        if markers and self.behaviors:
            raise ValueError("Markers carry no behaviors")

    @classmethod
    def of(cls, *behaviors: Behavior) -> 'RegionLabel':
        return cls(behaviors=frozenset(behaviors))

    @property
    def is_marker(self) -> bool:
        return self.boundary is not None or self.out_of_range

    @property
    def names(self) -> List[str]:
        return [b.value for b in _BEHAVIOR_ORDER if b in self.behaviors]

    @property
    def label(self) -> str:
        if self.out_of_range:
            return 'OutOfRange'
        if self.boundary is not None:
            return f'Boundary({self.boundary})'
        return '{' + ','.join(self.names) + '}'

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class PredictedCycle:
    """Harmonic-balance solution; omega = 0 marks an equilibrium prediction"""
    amplitude: float
    omega: float
    stable: bool
    index: int
    p_value: float

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"Predicted amplitude must be positive, got {self.amplitude}")

    def to_dict(self) -> Dict:
        return {'amplitude': self.amplitude, 'omega': self.omega,
                'stable': self.stable, 'index': self.index, 'p': self.p_value}


def _axis_denominator(s: np.ndarray, p: ChuaParams) -> np.ndarray:
    """s^3 + 2*gamma*s^2 + beta*s + alpha*beta, rejecting values lost in rounding"""
    terms = (s ** 3, 2.0 * p.gamma * s ** 2, p.beta * s, np.full_like(s, p.alpha * p.beta))
    denominator = sum(terms)
    scale = sum(np.abs(term) for term in terms)
    if np.any(np.abs(denominator) <= DESCRIBING_FUNCTION['pole_tol'] * scale):
        raise PoleOnAxisError("G(s) has a pole on the sampled imaginary axis")
    return denominator


def transfer_function(omega: float, p: ChuaParams) -> ComplexPoint:
    """G(j*omega) = -alpha*(s^2 + s + beta) / (s^3 + 2*gamma*s^2 + beta*s + alpha*beta)

    Args:
        omega: Dimensionless angular frequency; +-inf gives the p0 = 0 limit
        p: Model parameters

    Raises:
        PoleOnAxisError: if the denominator vanishes at s = j*omega
    """
    if math.isinf(omega):
        return ComplexPoint(0.0, 0.0)
    s = 1j * omega
    numerator = -p.alpha * (s * s + s + p.beta)
    try:
        denominator = _axis_denominator(np.array([s]), p)[0]
    except PoleOnAxisError:
        raise PoleOnAxisError(f"G(s) has a pole at s = j*{omega}") from None
    value = numerator / denominator
    return ComplexPoint(value.real, value.imag)


def frequency_response(omegas: Iterable[float], p: ChuaParams) -> np.ndarray:
    """Vectorized G(j*omega) over finite frequencies"""
    s = 1j * np.asarray(list(omegas), dtype=float)
    denominator = _axis_denominator(s, p)
    return -p.alpha * (s ** 2 + s + p.beta) / denominator


def interception_points(p: ChuaParams) -> InterceptionSet:
    """Closed-form frequencies omega_i and points p_i where G(j*omega) is real"""
    gamma, beta, alpha = p.gamma, p.beta, p.alpha
    discriminant = gamma * gamma - beta
    omega2 = omega3 = p2 = p3 = None
    if discriminant >= 0.0:
        root = math.sqrt(discriminant)
        sq2 = beta - gamma - root
        sq3 = beta - gamma + root
        if sq2 > 0.0:
            omega2 = math.sqrt(sq2)
            p2 = -alpha / (gamma + root)
        if sq3 > 0.0:
            omega3 = math.sqrt(sq3)
            p3 = -alpha / (gamma - root)
    return InterceptionSet(
        omega=(None, 0.0, omega2, omega3),
        p=(0.0, -1.0, p2, p3),
        exists=(True, True, omega2 is not None, omega3 is not None),
    )


def _series_ratio(X: float) -> Optional[float]:
    """2*I1(X)/X from its power series; None when the term cap is reached"""
    rtol = DESCRIBING_FUNCTION['series_rtol']
    quarter = X * X / 4.0
    term = 1.0
    total = 1.0
    for j in range(1, DESCRIBING_FUNCTION['series_max_terms'] + 1):
        term *= quarter / (j * (j + 1))
        total += term
        if term < rtol * total:
            return total
    return None


def _quadrature_ratio(X: float) -> float:
    """Fundamental sine coefficient of sinh(X sin t) over X"""
    value, _ = integrate.quad(
        lambda theta: math.sinh(X * math.sin(theta)) * math.sin(theta),
        0.0, math.pi,
        epsabs=0.0,
        epsrel=DESCRIBING_FUNCTION['quadrature_rtol'],
        limit=DESCRIBING_FUNCTION['quadrature_limit'],
    )
    return 2.0 * value / (math.pi * X)


def bessel_ratio(X: float, method: str = 'series') -> float:
    """S(X) = 2*I1(X)/X, the sinh part of the describing function

    S(0) = 1 and S is strictly increasing on X > 0.

    Args:
        X: Amplitude (>= 0)
        method: 'series' (power series, Bessel fallback past the term cap),
            'bessel' (scipy.special.i1) or 'quadrature' (scipy.integrate.quad)
    """
    if method not in DF_METHODS:
        raise ValueError(f"Unknown describing-function method '{method}', use one of {DF_METHODS}")
    if not X >= 0.0:
        raise ContractViolationError(f"Amplitude must be non-negative, got {X}")
    if X > DESCRIBING_FUNCTION['amplitude_max']:
        raise DivergedError(f"Amplitude {X:.6g} overflows the describing function")
    if X == 0.0:
        return 1.0
    if method == 'series':
        value = _series_ratio(X)
        if value is not None:
            return value
        logger.debug(f"Series cap reached at X = {X:.6g}; using the Bessel form")
        method = 'bessel'
    if method == 'bessel':
        return 2.0 * float(special.i1(X)) / X
    return _quadrature_ratio(X)


def describing_function(X: float, p: ChuaParams, method: str = 'series') -> float:
    """N(X) = -g0 - I0 * 2*I1(X)/X; N(0) = -(g0 + I0)"""
    return -p.g0 - p.I0 * bessel_ratio(X, method)


def locus_inverse(X: float, p: ChuaParams, method: str = 'series') -> float:
    """Geometric locus -1/N(X); starts at 1/(g0 + I0) and tends to 0

    Raises:
        LocusDiscontinuityError: where N(X) vanishes to within rounding of
            its two terms, e.g. at locus_discontinuity(p)
    """
    if math.isinf(X) and p.I0 != 0.0:
        return 0.0
    ratio = bessel_ratio(X, method)
    n_value = -p.g0 - p.I0 * ratio
    scale = abs(p.g0) + abs(p.I0) * ratio
    if abs(n_value) <= DESCRIBING_FUNCTION['locus_zero_tol'] * scale:
        raise LocusDiscontinuityError(f"N(X) = 0 at X = {X:.6g}")
    return -1.0 / n_value


def _solve_ratio(target: float) -> Optional[float]:
    """Amplitude X > 0 with 2*I1(X)/X = target, or None"""
    if not target > 1.0:
        return None
    x_max = DESCRIBING_FUNCTION['amplitude_max']
    hi = 1.0
    while bessel_ratio(hi, 'bessel') < target:
        if hi >= x_max:
            logger.warning(f"Harmonic-balance root for S(X) = {target:.6g} lies beyond X = {x_max}")
            return None
        hi = min(2.0 * hi, x_max)
    return brentq(lambda X: bessel_ratio(X, 'series') - target, 0.0, hi,
                  xtol=DESCRIBING_FUNCTION['root_xtol'], rtol=1e-15)


def locus_discontinuity(p: ChuaParams) -> Optional[float]:
    """Amplitude where N(X) = 0, which exists only when (g0 + I0)*I0 < 0"""
    if p.I0 == 0.0 or p.g_total * p.I0 >= 0.0:
        return None
    return _solve_ratio(-p.g0 / p.I0)


def _in_unstable_zone(re: float, points: InterceptionSet) -> bool:
    """Real-axis points encircled by the Nyquist diagram for alpha < beta < gamma**2"""
    if -1.0 < re < 0.0:
        return True
    if points.p2 is not None and points.p3 is not None:
        return points.p3 < re < points.p2
    return False


def _stable_crossing(p_value: float, p: ChuaParams, points: InterceptionSet) -> bool:
    """Geometric rule: stable iff the locus enters a stable zone as X grows"""
    # d(-1/N)/dX = N'(X)/N^2 and N'(X) = -I0 * S'(X) with S' > 0
    direction = -math.copysign(1.0, p.I0)
    step = 1e-9 * max(1.0, abs(p_value))
    return not _in_unstable_zone(p_value + direction * step, points)


def predicted_limit_cycles(p: ChuaParams) -> List[PredictedCycle]:
    """Limit cycles from -1/N(X) = p_i, i in {2, 3}, with their stability

    Raises:
        ContractViolationError: if gamma**2 <= beta (omega2, omega3 not distinct)
    """
    if not p.gamma ** 2 > p.beta:
        raise ContractViolationError("Limit-cycle prediction requires gamma**2 > beta")
    points = interception_points(p)
    cycles = []
    if p.I0 == 0.0:
        return cycles
    for index in (2, 3):
        p_value = points.p[index]
        if p_value is None:
            continue
        X = _solve_ratio((-p.g0 + 1.0 / p_value) / p.I0)
        if X is None or X <= 0.0:
            continue
        cycles.append(PredictedCycle(
            amplitude=X, omega=points.omega[index],
            stable=_stable_crossing(p_value, p, points),
            index=index, p_value=p_value))
    return cycles


def predicted_equilibria(p: ChuaParams) -> List[PredictedCycle]:
    """Off-origin equilibria as zero-frequency cycles: -1/N(X) = p1 = -1"""
    if p.I0 == 0.0:
        return []
    X = _solve_ratio(-(1.0 + p.g0) / p.I0)
    if X is None:
        return []
    points = interception_points(p)
    return [PredictedCycle(amplitude=X, omega=0.0,
                           stable=_stable_crossing(-1.0, p, points),
                           index=1, p_value=-1.0)]


def harmonic_initial_state(cycle: PredictedCycle, p: ChuaParams) -> State:
    """Phase point of x = X*cos(omega*t) and the filter response where y = 0

    y and z follow x through Y = X*s/(s^2 + s + beta) and Z = -beta*Y/s; the
    returned point is the upward y crossing.
    """
    if cycle.omega <= 0.0:
        return State(cycle.amplitude, 0.0, -cycle.amplitude)
    s = 1j * cycle.omega
    y_phasor = cycle.amplitude * s / (s * s + s + p.beta)
    z_phasor = -p.beta * y_phasor / s
    theta = -math.pi / 2.0 - cmath.phase(y_phasor)
    rotation = cmath.exp(1j * theta)
    return State(cycle.amplitude * math.cos(theta), 0.0, (z_phasor * rotation).real)


def classify_region(p: ChuaParams) -> RegionLabel:
    """Coexisting behaviors predicted by the describing-function analysis

    Depends only on g0 + I0, sign(I0), 1/p2 and 1/p3. Exact equality with a
    region boundary returns a boundary marker; parameters outside
    alpha < beta < gamma**2 return the out-of-range marker.
    """
    if not p.in_main_range():
        return RegionLabel(out_of_range=True)
    points = interception_points(p)
    k = p.g_total
    inv_p2, inv_p3 = points.inv_p2, points.inv_p3
    if p.I0 == 0.0:
        return RegionLabel(boundary='I0=0')
    for value, name in ((-1.0, 'g0+I0=-1'), (inv_p2, 'g0+I0=1/p2'),
                        (inv_p3, 'g0+I0=1/p3'), (0.0, 'g0+I0=0')):
        if k == value:
            return RegionLabel(boundary=name)

    B = Behavior
    if k * p.I0 > 0.0:
        table = (
            (B.UNSTABLE,),
            (B.ORIGIN, B.UNSTABLE),
            (B.CYCLE_OMEGA2_TO_CHAOS, B.UNSTABLE),
            (B.ORIGIN, B.CYCLE_OMEGA2_TO_CHAOS, B.UNSTABLE),
            (B.ORIGIN,),
        )
    else:
        table = (
            (B.EQUILIBRIA_PM, B.CYCLE_OMEGA3, B.CYCLE_OMEGA2_TO_CHAOS),
            (B.ORIGIN, B.CYCLE_OMEGA3),
            (B.CYCLE_OMEGA3,),
            (B.ORIGIN,),
            (B.ORIGIN, B.CYCLE_OMEGA2_TO_CHAOS, B.UNSTABLE),
        )
    band = int(np.searchsorted([-1.0, inv_p2, inv_p3, 0.0], k))
    return RegionLabel.of(*table[band])


def nyquist_table(p: ChuaParams, omega_min: float = None, omega_max: float = None,
                  n_points: int = None) -> pd.DataFrame:
    """G(j*omega) on a log-spaced grid as columns omega, re_G, im_G"""
    omega_min = omega_min or DESCRIBING_FUNCTION['nyquist_omega_min']
    omega_max = omega_max or DESCRIBING_FUNCTION['nyquist_omega_max']
    n_points = n_points or DESCRIBING_FUNCTION['nyquist_points']
    if not 0.0 < omega_min < omega_max:
        raise ValueError(f"Need 0 < omega_min < omega_max, got {omega_min}, {omega_max}")
    omegas = np.logspace(math.log10(omega_min), math.log10(omega_max), n_points)
    response = frequency_response(omegas, p)
    return pd.DataFrame({'omega': omegas, 're_G': response.real, 'im_G': response.imag})


def describing_function_table(p: ChuaParams, x_max: float = 10.0, n_points: int = None,
                              method: str = 'series') -> pd.DataFrame:
    """N(X) and -1/N(X) for X on [0, x_max]; the locus is NaN where N = 0"""
    n_points = n_points or DESCRIBING_FUNCTION['df_points']
    if not x_max > 0.0:
        raise ValueError(f"x_max must be positive, got {x_max}")
    amplitudes = np.linspace(0.0, x_max, n_points)
    gains = np.array([describing_function(X, p, method) for X in amplitudes])
    with np.errstate(divide='ignore'):
        locus = np.where(gains != 0.0, -1.0 / np.where(gains != 0.0, gains, 1.0), np.nan)
    return pd.DataFrame({'X': amplitudes, 'N': gains, 'locus': locus})
