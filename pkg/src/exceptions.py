"""
Exception hierarchy for HyperChua
All library errors derive from ChuaError so callers can catch one type.
"""

from typing import List, Optional, Sequence


class ChuaError(Exception):
    """Base class for every error raised by the HyperChua package"""


class DivergedError(ChuaError, ArithmeticError):
    """State or argument escaped the representable range (model blow-up)"""

    def __init__(self, message: str, t: Optional[float] = None,
                 state: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.t = t
        self.state = None if state is None else [float(v) for v in state]


class PoleOnAxisError(ChuaError, ZeroDivisionError):
    """Denominator of G(j*omega) vanished on the imaginary axis"""


class LocusDiscontinuityError(ChuaError, ZeroDivisionError):
    """N(X) = 0, so the locus -1/N(X) is undefined at this amplitude"""


class ContractViolationError(ChuaError, ValueError):
    """A documented precondition of an operation does not hold"""


class StiffnessError(ChuaError, RuntimeError):
    """Adaptive step size underflowed before reaching the end time"""

    def __init__(self, message: str, t: Optional[float] = None,
                 state: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.t = t
        self.state = None if state is None else [float(v) for v in state]


class InsufficientCrossingsError(ChuaError, ValueError):
    """Too few Poincare crossings to estimate a frequency"""


class ConfigError(ChuaError, ValueError):
    """Malformed run configuration; carries every validation message found"""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("Invalid configuration: " + "; ".join(self.errors))
