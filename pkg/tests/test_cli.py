"""
Tests for the hyperchua command line

main(argv) is called in-process and returns the exit status; every run
writes into its own tmp_path output directory.
"""

import json

import pandas as pd
import pytest

from src.main import build_parser, main


def run(tmp_path, *argv):
    return main(list(argv) + ['--output-dir', str(tmp_path)])


def read_json(tmp_path, name):
    return json.loads((tmp_path / name).read_text())


class TestAnalyticCommands:
    def test_intercepts(self, tmp_path, capsys):
        assert run(tmp_path, 'intercepts', '--alpha', '10', '--beta', '20') == 0
        data = read_json(tmp_path, 'intercepts.json')
        assert data['inv_p2'] == pytest.approx(-0.87016, abs=1e-4)
        assert data['inv_p3'] == pytest.approx(-0.2298, abs=1e-4)
        assert data['omega0'] == '+-inf'
        assert json.loads(capsys.readouterr().out) == data

    def test_describing_function_table(self, tmp_path):
        assert run(tmp_path, 'df', '--g0', '0', '--i0', '1', '--xmax', '10') == 0
        table = pd.read_csv(tmp_path / 'describing_function.csv')
        assert list(table.columns) == ['X', 'N', 'locus']
        assert table['N'].iloc[0] == -1.0
        assert table['X'].iloc[-1] == 10.0

    def test_cycles(self, tmp_path):
        assert run(tmp_path, 'cycles', '--regime', 'hidden_omega3') == 0
        data = read_json(tmp_path, 'cycles.json')
        assert data['region'] == '{EquilibriaPm,CycleOmega2ToChaos,CycleOmega3}'
        assert sorted(c['index'] for c in data['limit_cycles']) == [2, 3]
        assert len(data['equilibria']) == 3
        assert data['equilibrium_predictions'][0]['stable'] is True

    def test_cycles_above_gamma_squared_is_a_usage_error(self, tmp_path):
        assert run(tmp_path, 'cycles', '--beta', '31') == 1

    def test_fromcircuit(self, tmp_path):
        assert run(tmp_path, 'fromcircuit', '--circuit', 'circuit2') == 0
        data = read_json(tmp_path, 'circuit.json')
        assert data['params']['alpha'] == pytest.approx(10.0)
        assert data['params']['I0'] == pytest.approx(3.004e-4, rel=1e-3)
        assert data['tau'] == pytest.approx(1e-3)
        assert data['frequencies_hz']['f2'] == pytest.approx(305.0, abs=3.0)
        assert data['roundtrip_error'] < 1e-12

    def test_fromcircuit_from_config(self, tmp_path):
        config = tmp_path / 'circuit.json.in'
        config.write_text(json.dumps({'circuit': 'circuit1'}))
        assert run(tmp_path, 'fromcircuit', '--config', str(config)) == 0
        assert read_json(tmp_path, 'circuit.json')['params']['beta'] == pytest.approx(20.0)

    def test_regions(self, tmp_path):
        assert run(tmp_path, 'regions', '--g-total', '-0.5') == 0
        assert read_json(tmp_path, 'region.json')['region'] == '{CycleOmega3}'
        summary = pd.read_csv(tmp_path / 'regions.csv')
        assert 'double_scroll' in set(summary['Regime'])

    def test_regions_compare(self, tmp_path):
        assert run(tmp_path, 'regions', '--compare', 'omega2_cycle,period_two') == 0
        comparison = read_json(tmp_path, 'comparison.json')
        assert comparison['regimes'] == ['omega2_cycle', 'period_two']
        assert set(comparison['differences']) == {'g0', 'g_total'}
        assert set(comparison['regions']) == {'omega2_cycle', 'period_two'}

    @pytest.mark.parametrize('compare', ['omega2_cycle', 'omega2_cycle,nowhere'])
    def test_regions_compare_rejects(self, tmp_path, compare):
        assert run(tmp_path, 'regions', '--compare', compare) == 1
        assert not (tmp_path / 'comparison.json').exists()

    def test_custom_regime_from_config(self, tmp_path):
        config = tmp_path / 'custom.json.in'
        config.write_text(json.dumps({
            'regimes': {'lab_point': {'description': 'Bench setting', 'alpha': 10.0,
                                      'beta': 13.3, 'I0': 0.0003, 'g_total': -0.5}},
            'regime': 'lab_point'}))
        assert run(tmp_path, 'regions', '--config', str(config)) == 0
        assert read_json(tmp_path, 'region.json')['region'] == '{CycleOmega3}'
        summary = pd.read_csv(tmp_path / 'regions.csv').set_index('Regime')
        assert summary.loc['lab_point', 'Description'] == 'Bench setting'

    def test_nyquist(self, tmp_path):
        assert run(tmp_path, 'nyquist', '--points', '100') == 0
        assert len(pd.read_csv(tmp_path / 'nyquist.csv')) == 100
        assert (tmp_path / 'nyquist.svg').exists()


class TestSimulationCommands:
    def test_simulate_short_run(self, tmp_path):
        assert run(tmp_path, 'simulate', '--t', '5', '--record-interval', '0.1') == 0
        trajectory = pd.read_csv(tmp_path / 'trajectory.csv')
        assert list(trajectory.columns) == ['t', 'x', 'y', 'z']
        assert len(trajectory) == 51
        assert (tmp_path / 'trajectory_xy.svg').exists()

    def test_simulate_without_figures(self, tmp_path):
        assert run(tmp_path, 'simulate', '--t', '2', '--projection', 'x,z', '--no-render') == 0
        assert not (tmp_path / 'trajectory_xz.svg').exists()

    def test_bad_projection(self, tmp_path):
        assert run(tmp_path, 'simulate', '--projection', 'x,w') == 1
        assert not (tmp_path / 'trajectory.csv').exists()

    def test_divergence_writes_failure_report(self, tmp_path):
        status = run(tmp_path, 'simulate', '--alpha', '10', '--beta', '20', '--i0', '-0.7875',
                     '--g-total', '-1.5', '--x0', '5', '--t', '50')
        assert status == 2
        report = read_json(tmp_path, 'failure.json')
        assert report['type'] == 'DivergedError'
        assert report['t'] > 0.0
        assert len(report['state']) == 3

    def test_runaway_from_near_origin_is_reported_as_divergence(self, tmp_path):
        status = run(tmp_path, 'simulate', '--alpha', '10', '--beta', '20', '--i0', '-0.7875',
                     '--g-total', '-0.5', '--x0', '0.01', '--transient', '0', '--t', '200',
                     '--no-render')
        assert status == 2
        report = read_json(tmp_path, 'failure.json')
        assert report['type'] == 'DivergedError'
        assert 'blow-up' in report['error']

    def test_poincare(self, tmp_path):
        assert run(tmp_path, 'poincare', '--regime', 'omega2_cycle', '--transient', '50',
                   '--t', '20', '--no-render') == 0
        crossings = pd.read_csv(tmp_path / 'crossings.csv')
        assert len(crossings) > 4
        assert (crossings['y'] == 0.0).all()

    def test_lyapunov(self, tmp_path):
        assert run(tmp_path, 'lyapunov', '--g-total', '0.5', '--transient', '20',
                   '--t', '40') == 0
        data = read_json(tmp_path, 'lyapunov.json')
        assert data['class'] == 'FixedPoint'
        assert len(data['exponents']) == 3
        assert data['sum'] == pytest.approx(data['trace_mean'], abs=0.02)

    def test_bifurcate(self, tmp_path):
        status = run(tmp_path, 'bifurcate', '--g-total', '0.5', '--swept', 'g_total',
                     '--range', '0.5', '1.0', '--points', '3', '--transient', '20', '--t', '20',
                     '--t-transient-inherit', '10', '--lyapunov-time', '50', '--workers', '1')
        assert status == 0
        frame = pd.read_csv(tmp_path / 'bifurcation.csv')
        assert set(frame['direction']) == {'ForwardInherit', 'BackwardInherit'}
        assert set(frame['class']) == {'FixedPoint'}
        summary = read_json(tmp_path, 'bifurcation_summary.json')
        assert summary['first_chaotic'] == {'ForwardInherit': None, 'BackwardInherit': None}
        assert (tmp_path / 'origin_branch.csv').exists()
        assert (tmp_path / 'bifurcation.svg').exists()

    def test_bifurcate_needs_a_range(self, tmp_path):
        assert run(tmp_path, 'bifurcate', '--dry-run') == 1

    def test_analytic_map(self, tmp_path):
        assert run(tmp_path, 'map', '--nx', '6', '--ny', '3', '--workers', '1') == 0
        grid = pd.read_csv(tmp_path / 'map.csv', keep_default_na=False)
        assert len(grid) == 18
        summary = read_json(tmp_path, 'map_summary.json')
        assert summary['backend'] == 'Analytic'
        assert sum(summary['counts'].values()) == 18
        assert 'agreement' not in summary


class TestUsage:
    def test_dry_run_writes_nothing(self, tmp_path):
        target = tmp_path / 'out'
        assert main(['simulate', '--dry-run', '--output-dir', str(target)]) == 0
        assert not target.exists()

    def test_unknown_flag(self, tmp_path):
        assert run(tmp_path, 'simulate', '--frobnicate') == 1

    def test_unknown_command(self, tmp_path):
        assert run(tmp_path, 'animate') == 1

    def test_conflicting_slopes(self, tmp_path):
        assert run(tmp_path, 'intercepts', '--g0', '-1', '--g-total', '-1') == 1

    def test_unknown_regime(self, tmp_path):
        assert run(tmp_path, 'intercepts', '--regime', 'nowhere') == 1

    def test_invalid_config(self, tmp_path):
        config = tmp_path / 'bad.json'
        config.write_text(json.dumps({'integrator': {'order': 4}}))
        assert run(tmp_path, 'simulate', '--config', str(config)) == 1

    def test_invalid_parameter_value(self, tmp_path):
        assert run(tmp_path, 'intercepts', '--alpha', '-1') == 1

    def test_help_exits_cleanly(self, capsys):
        assert main(['--help']) == 0
        assert 'simulate' in capsys.readouterr().out

    def test_output_dir_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv('CHUA_OUTPUT_DIR', str(tmp_path))
        assert main(['intercepts']) == 0
        assert (tmp_path / 'intercepts.json').exists()

    def test_every_subcommand_is_registered(self):
        parser = build_parser()
        for command in ('simulate', 'poincare', 'lyapunov', 'bifurcate', 'map', 'nyquist',
                        'df', 'intercepts', 'cycles', 'fromcircuit', 'regions'):
            assert parser.parse_args([command]).command == command
