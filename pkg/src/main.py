"""
Main Application Controller for HyperChua
Command-line interface over the whole package: one subcommand per
operation family, CSV/JSON artifacts in the output directory and optional
SVG figures.

Exit status: 0 on success, 1 on usage or configuration errors, 2 on
numerical failure (with failure.json written to the output directory).
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from config.config import (CLI_DEFAULTS, DESCRIBING_FUNCTION, MAP_DEFAULTS,  # noqa: E402
                           SWEEP_INTEGRATOR, SWEEPABLE)
from src import __version__  # noqa: E402
from src.analysis.diagnostics import (AttractorKind, classify_attractor,  # noqa: E402
                                      dominant_frequency, lyapunov_spectrum)
from src.data.circuit_map import (CircuitSpec, dimensionless_from_circuit,  # noqa: E402
                                  predicted_frequencies_hz, roundtrip_error)
from src.data.config_loader import ConfigLoader  # noqa: E402
from src.exceptions import (ChuaError, ConfigError, ContractViolationError,  # noqa: E402
                            DivergedError, InsufficientCrossingsError)
from src.models.chua_model import (ChuaParams, State, equilibria,  # noqa: E402
                                   equilibrium_eigenvalues)
from src.models.describing_function import (DF_METHODS, classify_region,  # noqa: E402
                                            describing_function_table,
                                            interception_points, locus_discontinuity,
                                            nyquist_table, predicted_equilibria,
                                            predicted_limit_cycles)
from src.scenarios.bifurcation import DIRECTIONS, BifurcationSpec, bifurcation_diagram  # noqa: E402
from src.scenarios.parameter_plane import (Backend, GridSpec, agreement,  # noqa: E402
                                           parameter_plane_map)
from src.scenarios.regime_manager import RegimeManager  # noqa: E402
from src.simulation.integrator import (METHODS, Diverged, IntegratorSettings,  # noqa: E402
                                       integrate, poincare_crossings)
from src.utils.figures import FigureRenderer  # noqa: E402
from src.utils.report_writer import ReportWriter, default_output_dir  # noqa: E402

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('simulate', 'poincare', 'lyapunov', 'bifurcate', 'map', 'nyquist', 'df',
               'intercepts', 'cycles', 'fromcircuit', 'regions')


class UsageError(Exception):
    """Bad command line; reported with exit status 1"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _global_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('run options')
    group.add_argument('--output-dir', default=None,
                       help='Output directory (default: $CHUA_OUTPUT_DIR or data/output/)')
    group.add_argument('--log-level', default='INFO',
                       choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    group.add_argument('--dry-run', action='store_true',
                       help='Validate flags and config, compute nothing')
    group.add_argument('--workers', type=int, default=None,
                       help='Worker processes for sweeps (default: available cores)')
    group.add_argument('--seed', type=int, default=None,
                       help='Seed for randomized initial frames and probe states')
    group.add_argument('--no-render', action='store_true', help='Skip SVG figures')
    group.add_argument('--regime', default=None, help='Named parameter regime')
    group.add_argument('--config', default=None, help='JSON run configuration')

    params = parent.add_argument_group('model parameters')
    params.add_argument('--alpha', type=float)
    params.add_argument('--beta', type=float)
    params.add_argument('--g0', type=float)
    params.add_argument('--g-total', dest='g_total', type=float, help='g0 + I0')
    params.add_argument('--i0', dest='I0', type=float)
    return parent


def _integration_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('integration')
    group.add_argument('--method', choices=METHODS)
    group.add_argument('--step', type=float, help='Fixed step of RK4')
    group.add_argument('--rtol', type=float)
    group.add_argument('--atol', type=float)
    group.add_argument('--transient', dest='t_transient', type=float,
                       help='Discarded initial time')
    group.add_argument('--t', dest='t_sample', type=float, help='Recorded time')
    group.add_argument('--x0', type=float)
    group.add_argument('--y0', type=float)
    group.add_argument('--z0', type=float)
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with every subcommand and its flags"""
    parser = _Parser(prog='hyperchua',
                     description='Hyperbolic-sinh Chua circuit: simulation, diagnostics, '
                                 'describing-function analysis and sweeps')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', metavar='command', parser_class=_Parser)
    sub.required = True
    common = _global_options()
    integration = _integration_options()

    cmd = sub.add_parser('simulate', parents=[common, integration],
                         help='Integrate a trajectory')
    cmd.add_argument('--record-interval', type=float)
    cmd.add_argument('--projection', default='x,y', help='Plane of the SVG, e.g. x,z')

    cmd = sub.add_parser('poincare', parents=[common, integration],
                         help='Crossings of the plane y = 0')
    cmd.add_argument('--max-crossings', type=int)

    cmd = sub.add_parser('lyapunov', parents=[common, integration],
                         help='Lyapunov spectrum and attractor class')
    cmd.add_argument('--renorm-interval', type=float)

    cmd = sub.add_parser('bifurcate', parents=[common, integration],
                         help='Bidirectional bifurcation diagram')
    cmd.add_argument('--swept', choices=SWEEPABLE)
    cmd.add_argument('--range', nargs=2, type=float, metavar=('LO', 'HI'))
    cmd.add_argument('--points', dest='n_points', type=int)
    cmd.add_argument('--directions', help=f"Comma list of {', '.join(DIRECTIONS)}")
    cmd.add_argument('--t-transient-inherit', type=float)
    cmd.add_argument('--lyapunov-time', type=float)
    cmd.add_argument('--segment-points', type=int,
                     help='Points per independently run segment of an inherited chain')

    cmd = sub.add_parser('map', parents=[common, integration], help='Parameter-plane map')
    cmd.add_argument('--backend', choices=[b.value.lower() for b in Backend], default='analytic')
    cmd.add_argument('--x-axis', choices=SWEEPABLE)
    cmd.add_argument('--y-axis', choices=SWEEPABLE)
    cmd.add_argument('--x-range', nargs=2, type=float, metavar=('LO', 'HI'))
    cmd.add_argument('--y-range', nargs=2, type=float, metavar=('LO', 'HI'))
    cmd.add_argument('--nx', type=int)
    cmd.add_argument('--ny', type=int)
    cmd.add_argument('--ics-per-cell', type=int)
    cmd.add_argument('--lyapunov-time', type=float)

    cmd = sub.add_parser('nyquist', parents=[common], help='Nyquist diagram of G(jw)')
    cmd.add_argument('--omega-min', type=float, default=DESCRIBING_FUNCTION['nyquist_omega_min'])
    cmd.add_argument('--omega-max', type=float, default=DESCRIBING_FUNCTION['nyquist_omega_max'])
    cmd.add_argument('--points', type=int, default=DESCRIBING_FUNCTION['nyquist_points'])
    cmd.add_argument('--xmax', type=float, default=CLI_DEFAULTS['df_xmax'])

    cmd = sub.add_parser('df', parents=[common], help='Describing function N(X) table')
    cmd.add_argument('--xmax', type=float, default=CLI_DEFAULTS['df_xmax'])
    cmd.add_argument('--points', type=int, default=DESCRIBING_FUNCTION['df_points'])
    cmd.add_argument('--df-method', choices=DF_METHODS, default='series')

    sub.add_parser('intercepts', parents=[common], help='Real-axis interception points')
    sub.add_parser('cycles', parents=[common], help='Predicted limit cycles and equilibria')

    cmd = sub.add_parser('fromcircuit', parents=[common],
                         help='Dimensionless parameters of a physical circuit')
    cmd.add_argument('--circuit', default=None, help='Circuit preset name')

    cmd = sub.add_parser('regions', parents=[common], help='Named regimes and their predicted regions')
    cmd.add_argument('--compare', default=None,
                     help='Comma list of regimes to compare side by side')
    return parser


def configure_logging(level: str):
    logging.basicConfig(level=getattr(logging, level), format=CLI_DEFAULTS['log_format'],
                        stream=sys.stderr, force=True)


def _given(args: argparse.Namespace, names: Sequence[str]) -> Dict[str, Any]:
    return {name: getattr(args, name) for name in names
            if getattr(args, name, None) is not None}


class HyperChuaApplication:
    """Resolves parameters and settings for one invocation and runs it"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.regime_manager = RegimeManager()
        self.writer = ReportWriter(args.output_dir or default_output_dir())
        self.renderer = None if args.no_render else FigureRenderer(self.writer.output_dir)
        self.loader = ConfigLoader(
            self.regime_manager,
            default_params=self.regime_manager.get_params(CLI_DEFAULTS['regime']))
        self.params: Optional[ChuaParams] = None
        self.settings = None

    def prepare(self):
        """Load the config file and resolve the parameter set

        Raises:
            ConfigError: for an invalid config file
            UsageError: for contradictory flags
        """
        args = self.args
        if args.config:
            self.loader.load(args.config)
        if args.regime:
            if args.regime not in self.regime_manager.get_available_regimes():
                raise UsageError(f"Unknown regime '{args.regime}', available: "
                                 f"{', '.join(self.regime_manager.get_available_regimes())}")
            self.loader.data['regime'] = args.regime
        if 'regime' in self.loader.data:
            name = self.loader.data['regime']
            logger.info(f"Regime {name}: {self.regime_manager.get_regime_description(name)}")
        flags = _given(args, ('alpha', 'beta', 'g0', 'g_total', 'I0'))
        if 'g0' in flags and 'g_total' in flags:
            raise UsageError("Give either --g0 or --g-total, not both")
        self.params = self.loader.params().replace(**flags)
        logger.info(f"Parameters: alpha = {self.params.alpha:g}, beta = {self.params.beta:g}, "
                    f"g0 = {self.params.g0:.6g}, I0 = {self.params.I0:.6g} "
                    f"(g0 + I0 = {self.params.g_total:.6g})")
        # build the settings now so that --dry-run validates them
        self.settings = getattr(self, f'_settings_{args.command}', lambda: None)()

    def run(self) -> int:
        handler = getattr(self, f'run_{self.args.command}')
        handler()
        return 0

    # settings

    def integrator(self, **base) -> IntegratorSettings:
        settings = self.loader.integrator(IntegratorSettings(**base))
        return settings.replace(**_given(self.args, ('method', 'step', 'rtol', 'atol',
                                                     't_transient', 't_sample',
                                                     'record_interval')))

    def initial_state(self) -> State:
        x0, y0, z0 = CLI_DEFAULTS['initial_state']
        args = self.args
        return State(x0 if args.x0 is None else args.x0,
                     y0 if args.y0 is None else args.y0,
                     z0 if args.z0 is None else args.z0)

    def _settings_simulate(self) -> IntegratorSettings:
        axes = [a.strip() for a in self.args.projection.split(',')]
        if len(axes) != 2 or not set(axes) <= {'x', 'y', 'z'} or axes[0] == axes[1]:
            raise UsageError(f"--projection must name two of x, y, z, got '{self.args.projection}'")
        return self.integrator(t_transient=CLI_DEFAULTS['simulate_transient'],
                               t_sample=CLI_DEFAULTS['simulate_time'])

    def _settings_poincare(self) -> IntegratorSettings:
        return self.integrator()

    def _settings_regions(self) -> Optional[List[str]]:
        if self.args.compare is None:
            return None
        names = [n.strip() for n in self.args.compare.split(',') if n.strip()]
        unknown = [n for n in names if n not in self.regime_manager.get_available_regimes()]
        if unknown:
            raise UsageError(f"Unknown regimes in --compare: {', '.join(unknown)}")
        if len(names) < 2:
            raise UsageError(f"--compare needs at least two regimes, got '{self.args.compare}'")
        return names

    def _settings_lyapunov(self) -> IntegratorSettings:
        return self.integrator()

    def _settings_bifurcate(self) -> BifurcationSpec:
        args = self.args
        spec = self.loader.bifurcation_spec()
        if spec is None:
            sweep = None
            if 'regime' in self.loader.data:
                sweep = self.regime_manager.get_sweep(self.loader.data['regime'])
            if args.range is None and sweep is None:
                raise UsageError("bifurcate needs --range, a bifurcation config block "
                                 "or a sweep regime")
            fields = {'p_base': self.params}
            if sweep is not None:
                fields.update(swept=sweep['swept'], range=tuple(sweep['range']))
            if args.range is not None:
                fields['range'] = tuple(args.range)
            spec = BifurcationSpec(**fields, integrator=self.integrator(**SWEEP_INTEGRATOR))
        elif 'p_base' not in self.loader.data['bifurcation']:
            spec = spec.replace(p_base=self.params)

        changes = _given(args, ('swept', 'n_points', 't_transient_inherit', 'lyapunov_time',
                                'segment_points'))
        if args.range is not None:
            changes['range'] = tuple(args.range)
        if args.directions:
            changes['directions'] = tuple(d.strip() for d in args.directions.split(','))
        if any(getattr(args, name) is not None for name in ('x0', 'y0', 'z0')):
            changes['ic_cold'] = self.initial_state()
        changes['integrator'] = spec.integrator.replace(
            **_given(args, ('method', 'step', 'rtol', 'atol', 't_transient', 't_sample')))
        return spec.replace(**changes)

    def _settings_map(self) -> GridSpec:
        args = self.args
        spec = self.loader.grid_spec()
        if spec is None:
            spec = GridSpec(p_base=self.params, x_range=MAP_DEFAULTS['x_range'],
                            y_range=MAP_DEFAULTS['y_range'],
                            integrator=self.integrator(**SWEEP_INTEGRATOR))
        elif 'p_base' not in self.loader.data['grid']:
            spec = spec.replace(p_base=self.params)
        changes = _given(args, ('x_axis', 'y_axis', 'nx', 'ny', 'ics_per_cell', 'lyapunov_time',
                                'seed'))
        for name in ('x_range', 'y_range'):
            if getattr(args, name) is not None:
                changes[name] = tuple(getattr(args, name))
        changes['integrator'] = spec.integrator.replace(
            **_given(args, ('method', 'step', 'rtol', 'atol', 't_transient', 't_sample')))
        return spec.replace(**changes)

    def _settings_fromcircuit(self) -> CircuitSpec:
        if self.args.circuit:
            return CircuitSpec.from_preset(self.args.circuit)
        return self.loader.circuit() or CircuitSpec.from_preset(CLI_DEFAULTS['circuit'])

    # output helpers

    def _emit(self, payload: Dict[str, Any], filename: str):
        path = self.writer.write_json(payload, filename)
        with open(path, 'r', encoding='utf-8') as handle:
            sys.stdout.write(handle.read())

    def _params_block(self) -> Dict[str, float]:
        return self.params.to_dict()

    # subcommands

    def run_simulate(self):
        result = integrate(self.initial_state(), self.params, self.settings)
        if isinstance(result, Diverged):
            raise DivergedError(result.reason, t=result.t_escape, state=result.state)
        frame = result.to_frame()
        self.writer.write_csv(frame, 'trajectory.csv')
        if self.renderer:
            axes = tuple(a.strip() for a in self.args.projection.split(','))
            self.renderer.projection(frame, f'trajectory_{axes[0]}{axes[1]}.svg', axes,
                                     title=f'g0 + I0 = {self.params.g_total:.6g}')
        logger.info(f"Trajectory of {len(result)} points, final state "
                    f"({result.final_state.x:.6g}, {result.final_state.y:.6g}, "
                    f"{result.final_state.z:.6g})")

    def run_poincare(self):
        section = poincare_crossings(self.initial_state(), self.params, self.settings,
                                     self.args.max_crossings)
        if section.diverged is not None:
            d = section.diverged
            raise DivergedError(d.reason, t=d.t_escape, state=d.state)
        frame = section.to_frame()
        self.writer.write_csv(frame, 'crossings.csv')
        if self.renderer:
            self.renderer.poincare(frame, 'poincare.svg')
        if section.truncated:
            logger.warning(f"Only {len(section)} crossings within the time budget")
        logger.info(f"{len(section)} crossings recorded")

    def run_lyapunov(self):
        lyap = lyapunov_spectrum(self.initial_state(), self.params, self.settings,
                                 renorm_interval=self.args.renorm_interval, seed=self.args.seed)
        section = poincare_crossings(lyap.final_state, self.params,
                                     self.settings.replace(t_transient=0.0))
        attractor = classify_attractor(section, lyap, self.loader.thresholds())
        payload = {'params': self._params_block(), **lyap.to_dict(),
                   'sum': lyap.total, 'class': attractor.label, 'dominant_omega': None}
        if attractor.kind == AttractorKind.PERIODIC:
            try:
                payload['dominant_omega'] = dominant_frequency(section, attractor.period)
            except InsufficientCrossingsError as error:
                logger.warning(f"No dominant frequency: {error}")
        self._emit(payload, 'lyapunov.json')

    def run_bifurcate(self):
        spec = self.settings
        diagram = bifurcation_diagram(spec, workers=self.args.workers,
                                      thresholds=self.loader.thresholds() or None)
        frame = diagram.to_frame()
        self.writer.write_csv(frame, 'bifurcation.csv')
        self.writer.write_csv(diagram.origin_branch, 'origin_branch.csv')
        summary = {
            'swept': spec.swept, 'range': list(spec.range), 'n_points': spec.n_points,
            'p_base': spec.p_base.to_dict(),
            'transitions': {d: [list(t) for t in diagram.transitions(d)] for d in spec.directions},
            'first_chaotic': {d: diagram.first_onset(AttractorKind.CHAOTIC, d)
                              for d in spec.directions},
        }
        self.writer.write_json(summary, 'bifurcation_summary.json')
        if self.renderer:
            self.renderer.bifurcation(frame, 'bifurcation.svg', spec.swept, diagram.origin_branch)

    def run_map(self):
        spec = self.settings
        backend = Backend(self.args.backend.capitalize())
        grid = parameter_plane_map(spec, backend, workers=self.args.workers)
        self.writer.write_csv(grid.to_frame(), 'map.csv')
        codes, labels = grid.label_matrix()
        summary = {'backend': backend.value, 'x_axis': spec.x_axis, 'y_axis': spec.y_axis,
                   'x_range': list(spec.x_range), 'y_range': list(spec.y_range),
                   'nx': spec.nx, 'ny': spec.ny,
                   'counts': {label: int(np.count_nonzero(codes == code))
                              for code, label in enumerate(labels)}}
        if backend == Backend.NUMERIC:
            analytic = parameter_plane_map(spec, Backend.ANALYTIC, workers=1)
            summary['agreement'] = agreement(analytic, grid)
        self.writer.write_json(summary, 'map_summary.json')
        if self.renderer:
            self.renderer.parameter_plane(codes, labels, spec.x_range, spec.y_range, 'map.svg',
                                          spec.x_axis, spec.y_axis)

    def run_nyquist(self):
        table = nyquist_table(self.params, self.args.omega_min, self.args.omega_max,
                              self.args.points)
        self.writer.write_csv(table, 'nyquist.csv')
        if self.renderer:
            points = interception_points(self.params)
            locus = describing_function_table(self.params, self.args.xmax)
            self.renderer.nyquist(table, 'nyquist.svg', locus,
                                  {'p2': points.p2, 'p3': points.p3})

    def run_df(self):
        table = describing_function_table(self.params, self.args.xmax, self.args.points,
                                          self.args.df_method)
        self.writer.write_csv(table, 'describing_function.csv')

    def run_intercepts(self):
        points = interception_points(self.params)
        self._emit({'params': self._params_block(), **points.to_dict()}, 'intercepts.json')

    def run_cycles(self):
        p = self.params
        cycles = predicted_limit_cycles(p)
        payload = {
            'params': self._params_block(),
            'region': classify_region(p).label,
            'limit_cycles': [c.to_dict() for c in cycles],
            'equilibrium_predictions': [c.to_dict() for c in predicted_equilibria(p)],
            'locus_discontinuity': locus_discontinuity(p),
            'equilibria': [],
        }
        for point in equilibria(p):
            spectrum = equilibrium_eigenvalues(point, p)
            payload['equilibria'].append({'state': list(point), 'stable': spectrum.stable,
                                          'eigenvalues': [complex(v) for v in spectrum.eigenvalues]})
        self._emit(payload, 'cycles.json')

    def run_fromcircuit(self):
        circuit = self.settings
        mapping = dimensionless_from_circuit(circuit)
        frequencies = predicted_frequencies_hz(mapping.params, mapping.tau)
        worst = max(roundtrip_error(x, circuit) for x in np.linspace(-5.0, 5.0, 41))
        payload = {'circuit': circuit.to_dict(), **mapping.to_dict(),
                   'region': classify_region(mapping.params).label,
                   'frequencies_hz': frequencies.to_dict(), 'roundtrip_error': worst}
        self._emit(payload, 'circuit.json')

    def run_regions(self):
        summary = self.regime_manager.get_regime_summary()
        self.writer.write_csv(summary, 'regions.csv')
        if self.settings:
            comparison = self.regime_manager.compare_regimes(self.settings)
            self.writer.write_json(comparison, 'comparison.json')
            logger.info(f"Regimes {', '.join(self.settings)} differ in "
                        f"{', '.join(comparison['differences']) or 'nothing'}")
        region = classify_region(self.params)
        self._emit({'params': self._params_block(), 'region': region.label,
                    'behaviors': region.names}, 'region.json')


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line; returns the exit status"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as error:
        configure_logging('ERROR')
        logger.error(str(error))
        return 1
    except SystemExit as exit_request:
        return int(exit_request.code or 0)

    configure_logging(args.log_level)
    app = None
    try:
        app = HyperChuaApplication(args)
        app.prepare()
        if args.dry_run:
            logger.info(f"Dry run: '{args.command}' configuration is valid, nothing computed")
            return 0
        return app.run()
    except (UsageError, ConfigError, ContractViolationError) as error:
        logger.error(str(error))
        return 1
    except ChuaError as error:
        logger.error(f"Numerical failure: {error}")
        if app is not None:
            app.writer.write_failure(error)
        return 2
    except (ValueError, TypeError, OSError) as error:
        logger.error(str(error))
        return 1


if __name__ == '__main__':
    sys.exit(main())
