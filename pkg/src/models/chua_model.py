"""
Chua System Model for HyperChua
Dimensionless Chua circuit with an antiparallel-diode (sinh) nonlinearity:
parameters, phase-space state, vector field, Jacobian and equilibria.

The state equations are
    dx/dt = alpha * (-x + y + u(x))
    dy/dt = x - y + z
    dz/dt = -beta * y
with the Chua-diode characteristic u(x) = -(g0 * x + I0 * sinh(x)).
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Tuple

import numpy as np
from scipy.optimize import brentq

from config.config import MODEL_LIMITS
from src.exceptions import ContractViolationError, DivergedError

logger = logging.getLogger(__name__)

Rhs = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ChuaParams:
    """Dimensionless parameter set (alpha, beta, g0, I0)

    gamma = (1 + alpha) / 2 is derived on access and never stored.
    """
    alpha: float
    beta: float
    g0: float
    I0: float

    def __post_init__(self):
        for name in ('alpha', 'beta', 'g0', 'I0'):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    @property
    def gamma(self) -> float:
        return (1.0 + self.alpha) / 2.0

    @property
    def g_total(self) -> float:
        """Slope of -u at the origin, g0 + I0"""
        return self.g0 + self.I0

    def in_main_range(self) -> bool:
        """True when alpha < beta < gamma**2, where the rich dynamics live"""
        return self.alpha < self.beta < self.gamma ** 2

    def with_g_total(self, g_total: float) -> 'ChuaParams':
        """Same alpha, beta and I0 with g0 chosen so that g0 + I0 = g_total"""
        return dataclasses.replace(self, g0=g_total - self.I0)

    def replace(self, **changes: float) -> 'ChuaParams':
        """Copy with some fields changed; accepts g_total as a pseudo-field"""
        g_total = changes.pop('g_total', None)
        params = dataclasses.replace(self, **changes)
        if g_total is not None:
            params = params.with_g_total(g_total)
        return params

    def to_dict(self) -> Dict[str, float]:
        return {'alpha': self.alpha, 'beta': self.beta, 'g0': self.g0,
                'I0': self.I0, 'gamma': self.gamma, 'g_total': self.g_total}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ChuaParams':
        """Build from a mapping holding g0, or g_total from which g0 is derived"""
        missing = [key for key in ('alpha', 'beta', 'I0') if key not in data]
        if 'g0' not in data and 'g_total' not in data:
            missing.append('g0 (or g_total)')
        if missing:
            raise ValueError(f"Missing parameter fields: {missing}")
        I0 = float(data['I0'])
        g0 = float(data['g0']) if 'g0' in data else float(data['g_total']) - I0
        return cls(alpha=float(data['alpha']), beta=float(data['beta']), g0=g0, I0=I0)


@dataclass(frozen=True)
class State:
    """Point (x, y, z) of the dimensionless phase space"""
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ('x', 'y', 'z'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"State component {name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    def __iter__(self) -> Iterator[float]:
        return iter((self.x, self.y, self.z))

    def __neg__(self) -> 'State':
        return State(-self.x, -self.y, -self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, values) -> 'State':
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def distance(self, other: 'State') -> float:
        return math.sqrt((self.x - other.x) ** 2 + (self.y - other.y) ** 2
                         + (self.z - other.z) ** 2)


ORIGIN = State(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class EquilibriumSpectrum:
    """Eigenvalues of the Jacobian at an equilibrium, sorted by real part"""
    eigenvalues: np.ndarray
    stable: bool

    @property
    def max_real_part(self) -> float:
        return float(np.max(self.eigenvalues.real))


def _check_argument(x: float, t: float = None, state=None) -> None:
    if abs(x) > MODEL_LIMITS['sinh_overflow']:
        raise DivergedError(f"|x| = {abs(x):.6g} exceeds the sinh overflow guard",
                            t=t, state=state)


def nonlinearity_u(x: float, p: ChuaParams) -> float:
    """Dimensionless Chua-diode current u(x) = -(g0*x + I0*sinh(x))

    Args:
        x: Dimensionless voltage v1/B
        p: Model parameters

    Returns:
        Dimensionless current; exactly odd in x

    Raises:
        DivergedError: if |x| is beyond the sinh overflow guard
    """
    _check_argument(x)
    return -(p.g0 * x + p.I0 * math.sinh(x))


def nonlinearity_slope(x: float, p: ChuaParams) -> float:
    """Derivative u'(x) = -(g0 + I0*cosh(x))"""
    _check_argument(x)
    return -(p.g0 + p.I0 * math.cosh(x))


def vector_field(s: State, p: ChuaParams) -> State:
    """Time derivative of the state at s"""
    u = nonlinearity_u(s.x, p)
    return State(p.alpha * (-s.x + s.y + u),
                 s.x - s.y + s.z,
                 -p.beta * s.y)


def jacobian(s: State, p: ChuaParams) -> np.ndarray:
    """3x3 Jacobian of the vector field; rows 2 and 3 are state independent"""
    slope = nonlinearity_slope(s.x, p)
    return np.array([
        [p.alpha * (-1.0 + slope), p.alpha, 0.0],
        [1.0, -1.0, 1.0],
        [0.0, -p.beta, 0.0],
    ])


def jacobian_trace(x: float, p: ChuaParams) -> float:
    """trace(J) = alpha*(-1 + u'(x)) - 1; depends on x only"""
    return p.alpha * (-1.0 + nonlinearity_slope(x, p)) - 1.0


def characteristic_polynomial(s: State, p: ChuaParams) -> np.ndarray:
    """Coefficients [1, c2, c1, c0] of det(lambda*I - J(s))

    At the origin this is s^3 + 2*gamma*s^2 + beta*s + alpha*beta
    + (g0 + I0)*alpha*(s^2 + s + beta).
    """
    return np.poly(jacobian(s, p))


def residual(s: State, p: ChuaParams) -> float:
    return vector_field(s, p).norm()


def _nonzero_equilibrium_x(p: ChuaParams) -> float:
    """Positive root of (1 + g0)*x + I0*sinh(x) = 0, or nan when there is none"""
    if p.I0 == 0.0:
        if p.g0 == -1.0:
            logger.warning("g0 = -1 with I0 = 0: the whole line y = 0, z = -x is "
                           "in equilibrium; reporting the origin only")
        return math.nan

    ratio = -(1.0 + p.g0) / p.I0
    if ratio <= 1.0:
        return math.nan

    def gap(x: float) -> float:
        return math.sinh(x) / x - ratio

    lo, hi = MODEL_LIMITS['equilibrium_bracket']
    hi_max = MODEL_LIMITS['equilibrium_bracket_max']
    while gap(hi) < 0.0:
        if hi >= hi_max:
            logger.warning(f"Nonzero equilibria lie beyond |x| = {hi_max}; "
                           f"sinh(x)/x = {ratio:.6g} is not representable")
            return math.nan
        hi = min(2.0 * hi, hi_max)

    root = brentq(gap, lo, hi, xtol=MODEL_LIMITS['equilibrium_xtol'])

    # One Newton step on the physical residual, kept only if it helps
    def h(x: float) -> float:
        return (1.0 + p.g0) * x + p.I0 * math.sinh(x)

    dh = (1.0 + p.g0) + p.I0 * math.cosh(root)
    if dh != 0.0:
        polished = root - h(root) / dh
        if abs(h(polished)) < abs(h(root)):
            root = polished
    return root


def equilibria(p: ChuaParams) -> List[State]:
    """Equilibrium points: the origin, plus +-(x*, 0, -x*) when they exist

    The nonzero pair satisfies sinh(x)/x = -(1 + g0)/I0 and exists iff
    that ratio exceeds one.
    """
    points = [ORIGIN]
    x_star = _nonzero_equilibrium_x(p)
    if not math.isnan(x_star):
        points.append(State(x_star, 0.0, -x_star))
        points.append(State(-x_star, 0.0, x_star))
        logger.debug(f"Nonzero equilibria at x = +-{x_star:.12g}")
    return points


def equilibrium_eigenvalues(s: State, p: ChuaParams) -> EquilibriumSpectrum:
    """Eigenvalues of the Jacobian at an equilibrium and its stability

    Raises:
        ContractViolationError: if s is not an equilibrium of p
    """
    res = residual(s, p)
    if res >= MODEL_LIMITS['equilibrium_residual']:
        raise ContractViolationError(
            f"State {tuple(s)} is not an equilibrium (residual {res:.3g})")
    eigenvalues = np.linalg.eigvals(jacobian(s, p)).astype(complex)
    eigenvalues = eigenvalues[np.lexsort((eigenvalues.imag, eigenvalues.real))]
    return EquilibriumSpectrum(eigenvalues=eigenvalues,
                               stable=bool(np.all(eigenvalues.real < 0.0)))


def nearest_equilibrium(s: State, p: ChuaParams) -> Tuple[State, float]:
    """Closest equilibrium to s and its Euclidean distance"""
    best = min(equilibria(p), key=s.distance)
    return best, s.distance(best)


def make_rhs(p: ChuaParams) -> Rhs:
    """Array right-hand side f(t, y) for the integrators"""
    alpha, beta, g0, I0 = p.alpha, p.beta, p.g0, p.I0
    limit = MODEL_LIMITS['sinh_overflow']
    sinh = math.sinh

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        x = y[0]
        if not abs(x) <= limit:
            raise DivergedError(f"|x| = {abs(x):.6g} exceeds the sinh overflow guard",
                                t=t, state=y[:3])
        u = -(g0 * x + I0 * sinh(x))
        return np.array([alpha * (-x + y[1] + u), x - y[1] + y[2], -beta * y[1]])

    return rhs


def make_tangent_rhs(p: ChuaParams) -> Rhs:
    """Right-hand side of the state, a 3x3 tangent frame and int trace(J) dt

    Layout of the 13-vector: state (3), frame row-major with tangent vectors
    as columns (9), running trace integral (1).
    """
    alpha, beta, g0, I0 = p.alpha, p.beta, p.g0, p.I0
    limit = MODEL_LIMITS['sinh_overflow']

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        x = y[0]
        if not abs(x) <= limit:
            raise DivergedError(f"|x| = {abs(x):.6g} exceeds the sinh overflow guard",
                                t=t, state=y[:3])
        u = -(g0 * x + I0 * math.sinh(x))
        a11 = alpha * (-1.0 + -(g0 + I0 * math.cosh(x)))
        J = np.array([[a11, alpha, 0.0], [1.0, -1.0, 1.0], [0.0, -beta, 0.0]])
        frame = y[3:12].reshape(3, 3)
        out = np.empty(13)
        out[0] = alpha * (-x + y[1] + u)
        out[1] = x - y[1] + y[2]
        out[2] = -beta * y[1]
        out[3:12] = (J @ frame).ravel()
        out[12] = a11 - 1.0
        return out

    return rhs
