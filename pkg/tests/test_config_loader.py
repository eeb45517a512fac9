"""Tests for JSON run configurations"""

import json

import pytest

from config.config import SWEEP_INTEGRATOR
from src.data.config_loader import ConfigLoader
from src.exceptions import ConfigError
from src.models.chua_model import ChuaParams, State


def write_config(tmp_path, data, name='run.json'):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_regime_with_params_overlay(tmp_path):
    loader = ConfigLoader()
    loader.load(write_config(tmp_path, {'regime': 'double_scroll',
                                        'params': {'g_total': -1.18}}))
    p = loader.params()
    assert p.beta == 13.3
    assert p.g_total == pytest.approx(-1.18, abs=1e-12)


def test_default_params_apply_without_regime():
    default = ChuaParams(alpha=10.0, beta=20.0, g0=0.0375, I0=-0.7875)
    loader = ConfigLoader(default_params=default)
    loader.load_dict({'params': {'beta': 25.0}})
    assert loader.params() == default.replace(beta=25.0)


def test_params_alone_must_be_complete():
    loader = ConfigLoader()
    with pytest.raises(ConfigError) as info:
        loader.load_dict({'params': {'alpha': 10.0}})
    assert any('Missing parameter fields' in e for e in info.value.errors)


def test_collects_every_problem():
    loader = ConfigLoader()
    with pytest.raises(ConfigError) as info:
        loader.load_dict({'plot': {}, 'integrator': {'order': 5}, 'thresholds': {'chaos': 0.1}})
    errors = info.value.errors
    assert len(errors) == 3
    assert loader.validation_errors == errors


def test_invalid_values_are_reported():
    loader = ConfigLoader()
    with pytest.raises(ConfigError) as info:
        loader.load_dict({'integrator': {'method': 'Euler'}})
    assert info.value.errors[0].startswith('integrator:')


def test_missing_and_malformed_files(tmp_path):
    loader = ConfigLoader()
    with pytest.raises(ConfigError):
        loader.load(str(tmp_path / 'absent.json'))
    broken = tmp_path / 'broken.json'
    broken.write_text('{"regime": ')
    with pytest.raises(ConfigError):
        loader.load(str(broken))
    with pytest.raises(ConfigError):
        loader.load_dict(['regime'])


def test_integrator_block():
    loader = ConfigLoader()
    loader.load_dict({'integrator': {'method': 'RK4', 'step': 0.002, 't_sample': 50}})
    cfg = loader.integrator()
    assert (cfg.method, cfg.step, cfg.t_sample) == ('RK4', 0.002, 50)
    assert cfg.t_transient == 500.0


def test_bifurcation_block():
    loader = ConfigLoader()
    loader.load_dict({
        'regime': 'negative_i0_sweep',
        'integrator': {'t_transient': 50.0},
        'bifurcation': {'swept': 'g_total', 'range': [-1.0, 0.0], 'n_points': 11,
                        'directions': ['ForwardInherit'], 'ic_cold': [0.1, 0.0, 0.0],
                        'integrator': {'t_sample': 25.0}},
    })
    spec = loader.bifurcation_spec()
    assert spec.range == (-1.0, 0.0)
    assert spec.directions == ('ForwardInherit',)
    assert spec.ic_cold == State(0.1, 0.0, 0.0)
    assert spec.integrator.t_transient == 50.0
    assert spec.integrator.t_sample == 25.0
    assert spec.integrator.rtol == SWEEP_INTEGRATOR['rtol']
    assert spec.p_base.I0 == -0.7875


def test_bifurcation_needs_range():
    loader = ConfigLoader()
    with pytest.raises(ConfigError) as info:
        loader.load_dict({'regime': 'double_scroll', 'bifurcation': {'swept': 'beta'}})
    assert 'range' in info.value.errors[0]


def test_grid_block_with_explicit_base():
    loader = ConfigLoader()
    loader.load_dict({'grid': {'p_base': {'alpha': 10, 'beta': 13.3, 'I0': 0.0003,
                                          'g_total': -1.0},
                               'x_range': [-2, 1], 'y_range': [10.5, 30], 'nx': 4, 'ny': 2}})
    spec = loader.grid_spec()
    assert (spec.nx, spec.ny) == (4, 2)
    assert spec.x_range == (-2.0, 1.0)


def test_grid_needs_ranges():
    loader = ConfigLoader()
    with pytest.raises(ConfigError) as info:
        loader.load_dict({'regime': 'double_scroll', 'grid': {'nx': 3}})
    assert len(info.value.errors) == 2


def test_circuit_block():
    loader = ConfigLoader()
    loader.load_dict({'circuit': 'circuit1'})
    assert loader.circuit().kappa == -5.0
    with pytest.raises(ConfigError):
        loader.load_dict({'circuit': {'R': 1e3}})


def test_unknown_regime():
    with pytest.raises(ConfigError):
        ConfigLoader().load_dict({'regime': 'nowhere'})


def test_regimes_block_adds_named_regimes():
    loader = ConfigLoader()
    loader.load_dict({
        'regimes': {'bench': {'description': 'Bench sweep', 'alpha': 10.0, 'beta': 13.3,
                              'I0': 0.0003, 'g_total': -1.1,
                              'sweep': {'swept': 'g_total', 'range': [-1.2, -1.0]}}},
        'regime': 'bench'})
    assert loader.params().g_total == pytest.approx(-1.1, abs=1e-12)
    manager = loader.regime_manager
    assert manager.get_regime_description('bench') == 'Bench sweep'
    assert manager.bifurcation_spec('bench', n_points=3).range == (-1.2, -1.0)


def test_regimes_block_errors_are_collected():
    with pytest.raises(ConfigError) as raised:
        ConfigLoader().load_dict({'regimes': {
            'double_scroll': {'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.0},
            'partial': {'alpha': 10.0, 'beta': 13.3},
            'typo': {'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_totl': -1.0}}})
    assert len(raised.value.errors) == 3
