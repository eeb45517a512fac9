"""
Parameter-Plane Maps for HyperChua
Classifies a rectangular grid over two parameters, either analytically from
the describing-function regions or numerically by simulating every cell
from several initial conditions.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from config.config import MAP_DEFAULTS, SWEEP_DEFAULTS, SWEEPABLE
from src.analysis.diagnostics import AttractorKind, evaluate_point
from src.exceptions import ChuaError
from src.models.chua_model import ChuaParams, State, equilibria
from src.models.describing_function import (Behavior, classify_region,
                                            harmonic_initial_state,
                                            predicted_limit_cycles)
from src.scenarios.parallel import run_tasks
from src.simulation.integrator import IntegratorSettings

logger = logging.getLogger(__name__)

_ATTRACTOR_ORDER = {kind.value: rank for rank, kind in enumerate(AttractorKind)}


class Backend(Enum):
    ANALYTIC = 'Analytic'
    NUMERIC = 'Numeric'


@dataclass(frozen=True)
class GridSpec:
    """Two swept parameters over a rectangle; the rest come from p_base"""
    p_base: ChuaParams
    x_range: Tuple[float, float]
    y_range: Tuple[float, float]
    x_axis: str = MAP_DEFAULTS['x_axis']
    y_axis: str = MAP_DEFAULTS['y_axis']
    nx: int = MAP_DEFAULTS['nx']
    ny: int = MAP_DEFAULTS['ny']
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings.for_sweeps)
    ics_per_cell: int = SWEEP_DEFAULTS['ics_per_cell']
    near_origin: float = SWEEP_DEFAULTS['near_origin']
    near_equilibrium: float = SWEEP_DEFAULTS['near_equilibrium']
    probe_predicted_cycles: bool = SWEEP_DEFAULTS['probe_predicted_cycles']
    seed: int = SWEEP_DEFAULTS['seed']
    lyapunov_time: float = SWEEP_DEFAULTS['lyapunov_time']

    def __post_init__(self):
        errors = []
        for name in ('x_axis', 'y_axis'):
            if getattr(self, name) not in SWEEPABLE:
                errors.append(f"{name} must be one of {SWEEPABLE}, got '{getattr(self, name)}'")
        if self.x_axis == self.y_axis:
            errors.append(f"x_axis and y_axis must differ, both are '{self.x_axis}'")
        if {self.x_axis, self.y_axis} == {'g0', 'g_total'}:
            errors.append("g0 and g_total cannot be swept against each other")
        for name in ('x_range', 'y_range'):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                errors.append(f"{name} must satisfy lo <= hi, got {(lo, hi)}")
        for name in ('nx', 'ny', 'ics_per_cell'):
            if getattr(self, name) < 1:
                errors.append(f"{name} must be >= 1, got {getattr(self, name)}")
        if errors:
            raise ValueError("; ".join(errors))
        object.__setattr__(self, 'x_range', tuple(float(v) for v in self.x_range))
        object.__setattr__(self, 'y_range', tuple(float(v) for v in self.y_range))

    def x_values(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    def y_values(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)

    def params_at(self, x_value: float, y_value: float) -> ChuaParams:
        # replace() applies g_total after I0, so g0 follows a swept I0
        return self.p_base.replace(**{self.x_axis: float(x_value), self.y_axis: float(y_value)})

    def replace(self, **changes) -> 'GridSpec':
        return replace(self, **changes)


@dataclass(frozen=True)
class GridCell:
    """One cell: the set of labels found and any per-probe failures"""
    row: int
    col: int
    x_value: float
    y_value: float
    members: Tuple[str, ...]
    marker: Optional[str] = None
    errors: Tuple[str, ...] = ()

    @property
    def label(self) -> str:
        if self.marker is not None:
            return self.marker
        return '{' + ','.join(self.members) + '}'


@dataclass
class ClassificationGrid:
    """Rectangular, fully populated grid of cells in row-major order"""
    spec: GridSpec
    backend: Backend
    cells: List[GridCell]

    def __post_init__(self):
        if len(self.cells) != self.spec.nx * self.spec.ny:
            raise ValueError(f"Grid has {len(self.cells)} cells, expected "
                             f"{self.spec.nx} x {self.spec.ny}")

    def cell(self, row: int, col: int) -> GridCell:
        return self.cells[row * self.spec.nx + col]

    def to_frame(self) -> pd.DataFrame:
        rows = [{'row': c.row, 'col': c.col, self.spec.x_axis: c.x_value,
                 self.spec.y_axis: c.y_value, 'label': c.label,
                 'errors': '; '.join(c.errors)} for c in self.cells]
        return pd.DataFrame(rows, columns=['row', 'col', self.spec.x_axis,
                                           self.spec.y_axis, 'label', 'errors'])

    def label_matrix(self) -> Tuple[np.ndarray, List[str]]:
        """Integer codes (ny x nx) into the sorted list of distinct labels"""
        labels = sorted({c.label for c in self.cells})
        index = {label: code for code, label in enumerate(labels)}
        codes = np.array([index[c.label] for c in self.cells]).reshape(self.spec.ny, self.spec.nx)
        return codes, labels


def _analytic_cell(spec: GridSpec, row: int, col: int, x_value: float, y_value: float) -> GridCell:
    region = classify_region(spec.params_at(x_value, y_value))
    if region.is_marker:
        return GridCell(row, col, x_value, y_value, (), marker=region.label)
    return GridCell(row, col, x_value, y_value, tuple(region.names))


def probe_states(p: ChuaParams, spec: GridSpec, row: int, col: int) -> List[State]:
    """Initial conditions tried in one numeric cell

    +-near-origin and +-near-P1 (when the pair exists) up to ics_per_cell,
    topped up with seeded random states, then the harmonic seeds of stable
    predicted cycles.
    """
    near = State(spec.near_origin, 0.0, 0.0)
    probes = [near, -near]
    points = equilibria(p)
    if len(points) > 1:
        p1 = points[1]
        shifted = State(p1.x + spec.near_equilibrium, p1.y, p1.z)
        probes.extend([shifted, -shifted])
    probes = probes[:spec.ics_per_cell]

    rng = np.random.default_rng([spec.seed, row, col])
    while len(probes) < spec.ics_per_cell:
        probes.append(State.from_array(rng.uniform(-1.0, 1.0, 3)))

    if spec.probe_predicted_cycles and p.in_main_range():
        try:
            cycles = predicted_limit_cycles(p)
        except ChuaError as error:
            logger.debug(f"No cycle probes at {p}: {error}")
            cycles = []
        probes.extend(harmonic_initial_state(c, p) for c in cycles if c.stable)
    return probes


def _numeric_cell(spec: GridSpec, row: int, col: int, x_value: float, y_value: float) -> GridCell:
    params = spec.params_at(x_value, y_value)
    found = set()
    errors = []
    for s0 in probe_states(params, spec, row, col):
        evaluation = evaluate_point(params, s0, spec.integrator, spec.lyapunov_time)
        found.add(evaluation.attractor.label)
        if evaluation.error is not None:
            errors.append(evaluation.error)
    members = tuple(sorted(found, key=lambda label: (_ATTRACTOR_ORDER.get(label.split('(')[0], 0), label)))
    return GridCell(row, col, x_value, y_value, members, errors=tuple(errors))


def _run_row(task: Tuple[GridSpec, str, int]) -> List[GridCell]:
    """All cells of one grid row (module level for pickling)"""
    spec, backend_value, row = task
    classify = _analytic_cell if backend_value == Backend.ANALYTIC.value else _numeric_cell
    y_value = spec.y_values()[row]
    cells = []
    for col, x_value in enumerate(spec.x_values()):
        try:
            cells.append(classify(spec, row, col, float(x_value), float(y_value)))
        except (ChuaError, ValueError) as error:
            logger.warning(f"Cell ({row}, {col}) failed: {error}")
            cells.append(GridCell(row, col, float(x_value), float(y_value), (),
                                  marker='Failed', errors=(str(error),)))
    return cells


def parameter_plane_map(spec: GridSpec, backend: Backend = Backend.ANALYTIC,
                        workers: Optional[int] = None) -> ClassificationGrid:
    """Classify every cell of the grid with the chosen backend

    Rows are distributed over the worker pool and reassembled in row order,
    so the result does not depend on the worker count.

    Args:
        spec: Grid definition
        backend: Analytic (describing-function regions) or Numeric (simulation)
        workers: Process count (default: available cores)

    Returns:
        ClassificationGrid in row-major order
    """
    logger.info(f"{backend.value} map of {spec.y_axis} x {spec.x_axis}: "
                f"{spec.ny} x {spec.nx} cells")
    tasks = [(spec, backend.value, row) for row in range(spec.ny)]
    cells = [cell for row in run_tasks(_run_row, tasks, workers) for cell in row]
    failed = sum(1 for c in cells if c.errors)
    if failed:
        logger.warning(f"{failed} of {len(cells)} cells recorded failures")
    return ClassificationGrid(spec=spec, backend=backend, cells=cells)


def agreement(analytic: ClassificationGrid, numeric: ClassificationGrid) -> float:
    """Fraction of {Origin}-only analytic cells whose numeric set is {FixedPoint}

    Returns NaN when the analytic grid has no such cell.
    """
    if len(analytic.cells) != len(numeric.cells):
        raise ValueError("Grids must have the same shape")
    origin_only = (Behavior.ORIGIN.value,)
    fixed_only = (AttractorKind.FIXED_POINT.value,)
    compared = agreed = 0
    for a, n in zip(analytic.cells, numeric.cells):
        if a.members != origin_only:
            continue
        compared += 1
        if n.members == fixed_only:
            agreed += 1
        else:
            logger.warning(f"Backends disagree at {analytic.spec.x_axis} = {a.x_value:.6g}, "
                           f"{analytic.spec.y_axis} = {a.y_value:.6g}: {n.label}")
    return agreed / compared if compared else float('nan')
