"""
Circuit Mapping for HyperChua
Converts physical component values of the inductorless hyperbolic Chua
circuit into the dimensionless model: Shockley diode law, breakpoint voltage
B = m*eta*v_T, time scale tau = R*C2 and the predicted laboratory frequencies.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from config.config import CIRCUITS, DIODES, MODEL_LIMITS, THERMAL_VOLTAGE
from src.exceptions import ConfigError, DivergedError
from src.models.chua_model import ChuaParams, State, nonlinearity_u
from src.models.describing_function import interception_points

logger = logging.getLogger(__name__)

NIC_READINGS = ('printed', 'magnitude')


@dataclass(frozen=True)
class DiodeSpec:
    """Shockley parameters of m series by l parallel junctions"""
    i_s: float
    eta: float
    m: int = 1
    l: int = 1
    v_T: float = THERMAL_VOLTAGE

    def __post_init__(self):
        errors = []
        if not self.i_s > 0:
            errors.append(f"i_s must be positive, got {self.i_s}")
        if not self.eta >= 1:
            errors.append(f"eta must be >= 1, got {self.eta}")
        if not self.m >= 1:
            errors.append(f"m must be >= 1, got {self.m}")
        if not self.l >= 1:
            errors.append(f"l must be >= 1, got {self.l}")
        if not self.v_T > 0:
            errors.append(f"v_T must be positive, got {self.v_T}")
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def breakpoint_voltage(self) -> float:
        """B = m * eta * v_T"""
        return self.m * self.eta * self.v_T

    @classmethod
    def from_catalogue(cls, part: str, m: int = 1, l: int = 1,
                       v_T: float = THERMAL_VOLTAGE) -> 'DiodeSpec':
        if part not in DIODES:
            raise ValueError(f"Unknown diode '{part}', available: {sorted(DIODES)}")
        return cls(i_s=DIODES[part]['i_s'], eta=DIODES[part]['eta'], m=m, l=l, v_T=v_T)


@dataclass(frozen=True)
class CircuitSpec:
    """Component values in SI units; kappa is the signed sinh gain of the converter"""
    R: float
    C1: float
    C2: float
    L: float
    g_p: float
    diode: DiodeSpec
    kappa: float = 1.0

    def __post_init__(self):
        errors = [f"{name} must be positive and finite, got {getattr(self, name)}"
                  for name in ('R', 'C1', 'C2', 'L')
                  if not (getattr(self, name) > 0 and math.isfinite(getattr(self, name)))]
        if not math.isfinite(self.g_p):
            errors.append(f"g_p must be finite, got {self.g_p}")
        if not math.isfinite(self.kappa):
            errors.append(f"kappa must be finite, got {self.kappa}")
        if errors:
            raise ValueError("; ".join(errors))

    def replace(self, **changes) -> 'CircuitSpec':
        values = {'R': self.R, 'C1': self.C1, 'C2': self.C2, 'L': self.L,
                  'g_p': self.g_p, 'diode': self.diode, 'kappa': self.kappa}
        values.update(changes)
        return CircuitSpec(**values)

    def to_dict(self) -> Dict[str, Any]:
        return {'R': self.R, 'C1': self.C1, 'C2': self.C2, 'L': self.L,
                'g_p': self.g_p, 'kappa': self.kappa,
                'diode': {'i_s': self.diode.i_s, 'eta': self.diode.eta, 'm': self.diode.m,
                          'l': self.diode.l, 'v_T': self.diode.v_T}}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CircuitSpec':
        """Build from a JSON-style mapping

        L may be replaced by a 'synthetic_inductor' block {R3, R4, C3} and g_p
        by a 'nic' block {R1, R2, Rg}; the diode is either a catalogue 'part'
        or explicit i_s and eta.

        Raises:
            ConfigError: listing every missing or invalid field
        """
        errors = []
        for name in ('R', 'C1', 'C2'):
            if name not in data:
                errors.append(f"missing field '{name}'")
        if 'L' not in data and 'synthetic_inductor' not in data:
            errors.append("missing field 'L' (or 'synthetic_inductor')")
        if 'g_p' not in data and 'nic' not in data:
            errors.append("missing field 'g_p' (or 'nic')")
        diode_data = data.get('diode')
        if not isinstance(diode_data, dict):
            errors.append("missing object 'diode'")
        elif 'part' not in diode_data and not {'i_s', 'eta'} <= set(diode_data):
            errors.append("diode needs 'part' or both 'i_s' and 'eta'")
        if errors:
            raise ConfigError(errors)

        try:
            if 'L' in data:
                inductance = float(data['L'])
            else:
                block = data['synthetic_inductor']
                inductance, _ = synthetic_inductance(block['R3'], block['R4'], block['C3'])
            if 'g_p' in data:
                g_p = float(data['g_p'])
            else:
                block = data['nic']
                g_p = nic_conductance(block['R1'], block['R2'], block['Rg'])
            extra = {key: diode_data[key] for key in ('m', 'l', 'v_T') if key in diode_data}
            if 'part' in diode_data:
                diode = DiodeSpec.from_catalogue(diode_data['part'], **extra)
            else:
                diode = DiodeSpec(i_s=float(diode_data['i_s']), eta=float(diode_data['eta']), **extra)
            return cls(R=float(data['R']), C1=float(data['C1']), C2=float(data['C2']),
                       L=inductance, g_p=g_p, diode=diode, kappa=float(data.get('kappa', 1.0)))
        except (KeyError, TypeError, ValueError) as error:
            raise ConfigError([str(error)]) from error

    @classmethod
    def from_preset(cls, name: str) -> 'CircuitSpec':
        if name not in CIRCUITS:
            raise ValueError(f"Unknown circuit preset '{name}', available: {sorted(CIRCUITS)}")
        preset = CIRCUITS[name]
        diode = DiodeSpec.from_catalogue(preset['diode']['part'], m=preset['diode']['m'],
                                         l=preset['diode']['l'])
        return cls(R=preset['R'], C1=preset['C1'], C2=preset['C2'], L=preset['L'],
                   g_p=preset['g_p'], diode=diode, kappa=preset['kappa'])


@dataclass(frozen=True)
class DimensionlessMap:
    """Dimensionless parameters with the scales linking them to the circuit

    x = v1/B, y = v2/B, z = R*i_L/B and t = t_physical/tau.
    """
    params: ChuaParams
    B: float
    tau: float
    R: float = field(default=1.0)

    def to_physical(self, state: State) -> Tuple[float, float, float]:
        """(v1, v2, i_L) in volts and amperes"""
        return self.B * state.x, self.B * state.y, self.B * state.z / self.R

    def from_physical(self, v1: float, v2: float, i_L: float) -> State:
        return State(v1 / self.B, v2 / self.B, self.R * i_L / self.B)

    def physical_time(self, t: float) -> float:
        return t * self.tau

    def to_dict(self) -> Dict[str, Any]:
        return {'params': self.params.to_dict(), 'B': self.B, 'tau': self.tau, 'R': self.R,
                'scales': {'x': 'v1/B', 'y': 'v2/B', 'z': 'R*i_L/B', 't': 't_physical/tau'}}


@dataclass(frozen=True)
class PredictedFrequencies:
    """Laboratory frequencies in hertz; None where omega_i does not exist"""
    f2: Optional[float]
    f3: Optional[float]

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {'f2': self.f2, 'f3': self.f3,
                'f2_present': self.f2 is not None, 'f3_present': self.f3 is not None}


def shockley_current(v_d: float, d: DiodeSpec) -> float:
    """Diode current l*i_s*(exp(v_d/(m*eta*v_T)) - 1) in amperes

    Raises:
        DivergedError: if the exponent overflows
    """
    if not math.isfinite(v_d):
        raise ValueError(f"Diode voltage must be finite, got {v_d}")
    exponent = v_d / d.breakpoint_voltage
    if exponent > MODEL_LIMITS['sinh_overflow']:
        raise DivergedError(f"Shockley exponent {exponent:.6g} overflows")
    return d.l * d.i_s * math.expm1(exponent)


def chua_diode_current(v: float, c: CircuitSpec) -> float:
    """Current drawn by the Chua diode at voltage v: g_p*v + kappa*(i_d(v) - i_d(-v))

    The antiparallel pair contributes the odd part of the Shockley law,
    2*l*i_s*sinh(v/B), scaled by the converter gain kappa.
    """
    odd_part = shockley_current(v, c.diode) - shockley_current(-v, c.diode)
    return c.g_p * v + c.kappa * odd_part


def u_from_circuit(x: float, c: CircuitSpec) -> float:
    """Dimensionless diode current -(R/B)*i_D(B*x), equal to nonlinearity_u(x, params)"""
    B = c.diode.breakpoint_voltage
    return -(c.R / B) * chua_diode_current(B * x, c)


def dimensionless_from_circuit(c: CircuitSpec) -> DimensionlessMap:
    """alpha = C2/C1, beta = R^2*C2/L, g0 = R*g_p, I0 = 2*kappa*R*l*i_s/B, tau = R*C2"""
    B = c.diode.breakpoint_voltage
    params = ChuaParams(
        alpha=c.C2 / c.C1,
        beta=c.R * c.R * c.C2 / c.L,
        g0=c.R * c.g_p,
        I0=2.0 * c.kappa * c.R * c.diode.l * c.diode.i_s / B,
    )
    tau = c.R * c.C2
    logger.debug(f"Circuit maps to {params} with B = {B:.6g} V, tau = {tau:.6g} s")
    return DimensionlessMap(params=params, B=B, tau=tau, R=c.R)


def predicted_frequencies_hz(p: ChuaParams, tau: float) -> PredictedFrequencies:
    """f_i = omega_i / (2*pi*tau) for the omega2 and omega3 interceptions"""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    points = interception_points(p)
    scale = 2.0 * math.pi * tau
    f2 = None if points.omega2 is None else points.omega2 / scale
    f3 = None if points.omega3 is None else points.omega3 / scale
    if f2 is None or f3 is None:
        logger.info("Interception frequency absent for these parameters (gamma^2 < beta)")
    return PredictedFrequencies(f2=f2, f3=f3)


def synthetic_inductance(R3: float, R4: float, C3: float) -> Tuple[float, float]:
    """Single op-amp gyrator: Z ~ R3 + j*omega*R3*R4*C3, returns (L, series R_L)"""
    return R3 * R4 * C3, R3


def nic_conductance(R1: float, R2: float, Rg: float) -> float:
    """Negative-impedance-converter conductance -R2/(R1*Rg)"""
    return -R2 / (R1 * Rg)


def nic_sinh_gain(R1: float, R2: float, reading: str = 'printed') -> float:
    """Signed kappa of the converter driving the diode pair

    'printed' uses the published i-v law gain -R2/R1; 'magnitude' uses
    -R1/R2, the reading that reproduces the reported |I0| for R1 = 5 kOhm,
    R2 = 1 kOhm.
    """
    if reading not in NIC_READINGS:
        raise ValueError(f"reading must be one of {NIC_READINGS}, got '{reading}'")
    return -R2 / R1 if reading == 'printed' else -R1 / R2


def roundtrip_error(x: float, c: CircuitSpec) -> float:
    """Relative gap between the circuit-side and model-side u(x)"""
    model_side = nonlinearity_u(x, dimensionless_from_circuit(c).params)
    circuit_side = u_from_circuit(x, c)
    scale = max(abs(model_side), abs(circuit_side))
    return 0.0 if scale == 0.0 else abs(model_side - circuit_side) / scale
