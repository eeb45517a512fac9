"""
Bifurcation Diagrams for HyperChua
Bidirectional continuation sweeps of one parameter: each inherited point
starts from the (slightly perturbed) final state of its neighbour, so
coexisting branches show up as the sweep direction changes. Chains are cut
into fixed segments seeded by a coarse continuation so they run in parallel.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config.config import SWEEP_DEFAULTS, SWEEPABLE
from src.analysis.diagnostics import AttractorClass, AttractorKind, evaluate_point
from src.models.chua_model import ORIGIN, ChuaParams, State, equilibrium_eigenvalues
from src.scenarios.parallel import run_tasks
from src.simulation.integrator import Diverged, IntegratorSettings, integrate

logger = logging.getLogger(__name__)

FORWARD = 'ForwardInherit'
BACKWARD = 'BackwardInherit'
COLD = 'ColdStart'
DIRECTIONS = (FORWARD, BACKWARD, COLD)
_BRANCH_PREFIX = {FORWARD: 'F', BACKWARD: 'B', COLD: 'C'}


@dataclass(frozen=True)
class BifurcationSpec:
    """What to sweep, over which range, and how each point is started"""
    p_base: ChuaParams
    range: Tuple[float, float]
    swept: str = SWEEP_DEFAULTS['swept']
    n_points: int = SWEEP_DEFAULTS['n_points']
    directions: Tuple[str, ...] = SWEEP_DEFAULTS['directions']
    ic_cold: State = State(*SWEEP_DEFAULTS['ic_cold'])
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings.for_sweeps)
    inherit_perturbation: float = SWEEP_DEFAULTS['inherit_perturbation']
    t_transient_inherit: float = SWEEP_DEFAULTS['t_transient_inherit']
    lyapunov_time: float = SWEEP_DEFAULTS['lyapunov_time']
    segment_points: int = SWEEP_DEFAULTS['segment_points']

    def __post_init__(self):
        errors = []
        lo, hi = self.range
        if not lo < hi:
            errors.append(f"range must satisfy lo < hi, got {self.range}")
        if self.n_points < 2:
            errors.append(f"n_points must be >= 2, got {self.n_points}")
        if self.swept not in SWEEPABLE:
            errors.append(f"swept must be one of {SWEEPABLE}, got '{self.swept}'")
        unknown = [d for d in self.directions if d not in DIRECTIONS]
        if unknown or not self.directions:
            errors.append(f"directions must be a non-empty subset of {DIRECTIONS}, got {self.directions}")
        if self.segment_points < 1:
            errors.append(f"segment_points must be >= 1, got {self.segment_points}")
        if self.t_transient_inherit < 0:
            errors.append(f"t_transient_inherit must be >= 0, got {self.t_transient_inherit}")
        if errors:
            raise ValueError("; ".join(errors))
        object.__setattr__(self, 'range', (float(lo), float(hi)))
        object.__setattr__(self, 'directions', tuple(self.directions))
        # both ends must give valid parameter sets (alpha, beta > 0)
        self.params_at(lo)
        self.params_at(hi)

    def values(self) -> np.ndarray:
        return np.linspace(self.range[0], self.range[1], self.n_points)

    def params_at(self, value: float) -> ChuaParams:
        return self.p_base.replace(**{self.swept: float(value)})

    def replace(self, **changes) -> 'BifurcationSpec':
        return replace(self, **changes)


@dataclass(frozen=True)
class BifurcationRecord:
    """Post-transient crossings and class at one swept value of one chain"""
    swept_value: float
    direction: str
    crossings: Tuple[Tuple[float, str], ...]
    attractor: AttractorClass
    branch: str
    largest_exponent: Optional[float] = None

    def __post_init__(self):
        if not all(math.isfinite(x) for x, _ in self.crossings):
            raise ValueError("Crossing x-values must be finite")
        if self.attractor.kind == AttractorKind.PERIODIC and not self.crossings:
            raise ValueError("A periodic record needs crossings")

    @property
    def x_values(self) -> List[float]:
        return [x for x, _ in self.crossings]


@dataclass
class BifurcationDiagram:
    """All records of a sweep plus the analytic origin branch"""
    spec: BifurcationSpec
    records: List[BifurcationRecord]
    origin_branch: pd.DataFrame

    def by_direction(self, direction: str) -> List[BifurcationRecord]:
        """Records of one chain in the order they were computed"""
        return [r for r in self.records if r.direction == direction]

    def to_frame(self) -> pd.DataFrame:
        """One row per crossing; points without crossings get one NaN row"""
        rows = []
        for record in self.records:
            base = {'swept_value': record.swept_value, 'direction': record.direction,
                    'branch': record.branch, 'class': record.attractor.label}
            if not record.crossings:
                rows.append({**base, 'x_crossing': math.nan, 'crossing_direction': ''})
            for x, tag in record.crossings:
                rows.append({**base, 'x_crossing': x, 'crossing_direction': tag})
        columns = ['swept_value', 'direction', 'x_crossing', 'crossing_direction', 'branch', 'class']
        return pd.DataFrame(rows, columns=columns)

    def transitions(self, direction: str) -> List[Tuple[float, str, str]]:
        """(swept_value, previous label, new label) at every class change of a chain"""
        changes = []
        previous = None
        for record in self.by_direction(direction):
            label = record.attractor.label
            if previous is not None and label != previous:
                changes.append((record.swept_value, previous, label))
            previous = label
        return changes

    def label_sequence(self, direction: str) -> List[str]:
        """Class labels along a chain with consecutive repeats collapsed"""
        sequence = []
        for record in self.by_direction(direction):
            if not sequence or sequence[-1] != record.attractor.label:
                sequence.append(record.attractor.label)
        return sequence

    def first_onset(self, kind: AttractorKind, direction: str = FORWARD) -> Optional[float]:
        """Swept value of the first record of the given kind along a chain"""
        for record in self.by_direction(direction):
            if record.attractor.kind == kind:
                return record.swept_value
        return None


def _chain_order(direction: str, n_points: int) -> List[int]:
    order = list(range(n_points))
    return order[::-1] if direction == BACKWARD else order


def _segments(order: List[int], size: int) -> List[List[int]]:
    return [order[k:k + size] for k in range(0, len(order), size)]


def _record(spec: BifurcationSpec, value: float, direction: str, branch: str,
            evaluation) -> BifurcationRecord:
    crossings = tuple((c.state.x, c.direction.value) for c in evaluation.crossings)
    lyap = evaluation.lyapunov
    return BifurcationRecord(swept_value=float(value), direction=direction,
                             crossings=crossings, attractor=evaluation.attractor,
                             branch=branch,
                             largest_exponent=None if lyap is None else lyap.largest)


def _inherited(spec: BifurcationSpec, previous: State) -> State:
    return State(previous.x + spec.inherit_perturbation, previous.y, previous.z)


def _checkpoints(task: Tuple[BifurcationSpec, Sequence[int]]) -> List[Optional[State]]:
    """Coarse continuation through the first index of every segment

    Each start only runs the transient, from the perturbed state reached at
    the previous start. None marks a start whose run diverged.
    """
    spec, starts = task
    values = spec.values()
    cold_cfg = spec.integrator.replace(t_sample=0.0)
    inherit_cfg = cold_cfg.replace(t_transient=spec.t_transient_inherit)
    states: List[Optional[State]] = []
    previous: Optional[State] = None
    for index in starts:
        if previous is None:
            s0, cfg = spec.ic_cold, cold_cfg
        else:
            s0, cfg = _inherited(spec, previous), inherit_cfg
        result = integrate(s0, spec.params_at(values[index]), cfg)
        previous = None if isinstance(result, Diverged) else result.final_state
        states.append(previous)
    return states


def _run_segment(task: Tuple[BifurcationSpec, str, Sequence[int], Optional[State], Optional[Dict]]
                 ) -> List[Tuple[bool, BifurcationRecord]]:
    """Sequential continuation over consecutive points of one chain

    Module level for pickling. Returns (started cold, record) pairs; inherited
    branch ids are assigned afterwards by _number_branches.
    """
    spec, direction, indices, start, thresholds = task
    values = spec.values()
    inherit_cfg = spec.integrator.replace(t_transient=spec.t_transient_inherit)
    results = []
    previous = start

    for index in indices:
        value = values[index]
        params = spec.params_at(value)
        if direction == COLD or previous is None:
            s0, cfg, cold = spec.ic_cold, spec.integrator, True
        else:
            s0, cfg, cold = _inherited(spec, previous), inherit_cfg, False

        evaluation = evaluate_point(params, s0, cfg, spec.lyapunov_time, thresholds)
        branch = f'{_BRANCH_PREFIX[COLD]}{index}' if direction == COLD else ''
        results.append((cold, _record(spec, value, direction, branch, evaluation)))
        previous = evaluation.final_state
        if previous is None and direction != COLD:
            logger.debug(f"{direction} chain lost its state at {spec.swept} = {value:.6g}; "
                         f"restarting from the cold initial condition")
        logger.debug(f"{direction} {spec.swept} = {value:.6g}: {evaluation.attractor.label}")
    return results


def _number_branches(direction: str, results: Sequence[Tuple[bool, BifurcationRecord]]
                     ) -> List[BifurcationRecord]:
    """F<k>/B<k> ids along a chain; k grows at every cold restart"""
    if direction == COLD:
        return [record for _, record in results]
    prefix = _BRANCH_PREFIX[direction]
    number = -1
    records = []
    for cold, record in results:
        if cold:
            number += 1
        records.append(replace(record, branch=f'{prefix}{number}'))
    return records


def origin_branch(spec: BifurcationSpec) -> pd.DataFrame:
    """Stability of the origin along the sweep from its eigenvalues"""
    rows = []
    for value in spec.values():
        params = spec.params_at(value)
        spectrum = equilibrium_eigenvalues(ORIGIN, params)
        rows.append({'swept_value': float(value), 'g_total': params.g_total,
                     'stable': spectrum.stable, 'max_real_part': spectrum.max_real_part})
    return pd.DataFrame(rows)


def bifurcation_diagram(spec: BifurcationSpec, workers: Optional[int] = None,
                        thresholds: Optional[Dict] = None) -> BifurcationDiagram:
    """Sweep the configured parameter in every requested direction

    Inherited chains are cut into segments of spec.segment_points. A coarse
    transient-only continuation through the segment starts seeds each
    segment, then all segments and cold-start points run as independent
    tasks. Segmentation depends on the spec alone, and output order is
    directions as listed, then sweep order, so the result does not depend
    on the worker count.

    Args:
        spec: Sweep definition
        workers: Process count (default: available cores)
        thresholds: Classifier overrides

    Returns:
        BifurcationDiagram with records and the analytic origin branch
    """
    logger.info(f"Sweeping {spec.swept} over [{spec.range[0]:.6g}, {spec.range[1]:.6g}] "
                f"with {spec.n_points} points, directions {', '.join(spec.directions)}")
    segmented = {direction: _segments(_chain_order(direction, spec.n_points), spec.segment_points)
                 for direction in spec.directions if direction != COLD}
    seed_tasks = [(spec, [segment[0] for segment in segments]) for segments in segmented.values()]
    seeds = dict(zip(segmented, run_tasks(_checkpoints, seed_tasks, workers)))

    tasks = []
    for direction in spec.directions:
        if direction == COLD:
            tasks.extend((spec, direction, [i], None, thresholds)
                         for i in _chain_order(direction, spec.n_points))
            continue
        # the first segment starts cold like an unsegmented chain
        starts = [None] + seeds[direction][1:]
        tasks.extend((spec, direction, segment, start, thresholds)
                     for segment, start in zip(segmented[direction], starts))
    logger.debug(f"{len(tasks)} sweep tasks over {len(segmented)} inherited chains")

    results = run_tasks(_run_segment, tasks, workers)
    records = []
    for direction in spec.directions:
        chunk = [pair for task, result in zip(tasks, results) if task[1] == direction
                 for pair in result]
        records.extend(_number_branches(direction, chunk))
    diagram = BifurcationDiagram(spec=spec, records=records, origin_branch=origin_branch(spec))
    for direction in spec.directions:
        onset = diagram.first_onset(AttractorKind.CHAOTIC, direction)
        if onset is not None:
            logger.info(f"{direction}: first chaotic point at {spec.swept} = {onset:.6g}")
    return diagram
