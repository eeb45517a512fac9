"""
Config Loader for HyperChua
Loads and validates JSON run configurations. Block and field names mirror
the settings types: params, integrator, bifurcation, grid, thresholds,
circuit. A regimes block adds named regimes next to the built-in ones.
"""

import dataclasses
import json
import logging
import os
from typing import Any, Dict, List, Optional

from config.config import CLASSIFIER
from src.data.circuit_map import CircuitSpec
from src.exceptions import ConfigError
from src.models.chua_model import ChuaParams, State
from src.scenarios.bifurcation import BifurcationSpec
from src.scenarios.parameter_plane import GridSpec
from src.scenarios.regime_manager import RegimeManager
from src.simulation.integrator import IntegratorSettings

logger = logging.getLogger(__name__)

BLOCKS = ('regimes', 'regime', 'params', 'integrator', 'bifurcation', 'grid', 'thresholds',
          'circuit')
_PARAM_FIELDS = ('alpha', 'beta', 'g0', 'g_total', 'I0')
_REGIME_FIELDS = ('description', 'sweep') + _PARAM_FIELDS


def _field_names(cls) -> List[str]:
    return [f.name for f in dataclasses.fields(cls)]


class ConfigLoader:
    """Reads one JSON document and builds the typed settings it describes

    Every problem found is collected in validation_errors; load() raises a
    single ConfigError listing all of them.
    """

    def __init__(self, regime_manager: Optional[RegimeManager] = None,
                 default_params: Optional[ChuaParams] = None):
        self.regime_manager = regime_manager or RegimeManager()
        self.default_params = default_params
        self.data: Dict[str, Any] = {}
        self.validation_errors: List[str] = []
        self.registered: List[str] = []

    def load(self, path: str) -> Dict[str, Any]:
        """Read and validate a JSON config file

        Raises:
            ConfigError: if the file is unreadable, not JSON or invalid
        """
        if not os.path.isfile(path):
            raise ConfigError([f"config file not found: {path}"])
        try:
            with open(path, 'r', encoding='utf-8') as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigError([f"cannot read {path}: {error}"]) from error
        self.load_dict(data)
        logger.info(f"Configuration loaded from {path}")
        return self.data

    def load_dict(self, data: Any) -> Dict[str, Any]:
        """Validate an already parsed document"""
        if not isinstance(data, dict):
            raise ConfigError(["config root must be a JSON object"])
        self.data = data
        if not self.validate():
            raise ConfigError(self.validation_errors)
        return self.data

    def validate(self) -> bool:
        """Check block names, field names and that every block builds"""
        self.validation_errors = []
        for key in self.data:
            if key not in BLOCKS:
                self.validation_errors.append(f"unknown block '{key}', expected one of {BLOCKS}")
        self._validate_fields('integrator', _field_names(IntegratorSettings))
        self._validate_fields('bifurcation', _field_names(BifurcationSpec))
        self._validate_fields('grid', _field_names(GridSpec))
        self._validate_fields('thresholds', list(CLASSIFIER))
        self._validate_fields('params', list(_PARAM_FIELDS))
        if self.validation_errors:
            return False
        self.register_regimes()
        if self.validation_errors:
            return False

        for block, build in (('params', self.params), ('integrator', self.integrator),
                             ('bifurcation', self.bifurcation_spec), ('grid', self.grid_spec),
                             ('circuit', self.circuit)):
            if block in self.data or (block == 'params' and 'regime' in self.data):
                try:
                    build()
                except ConfigError as error:
                    self.validation_errors.extend(f"{block}: {e}" for e in error.errors)
                except (ValueError, TypeError, KeyError) as error:
                    self.validation_errors.append(f"{block}: {error}")
        return len(self.validation_errors) == 0

    def register_regimes(self):
        """Add each entry of the regimes block to the regime manager

        Entries take the fields of the built-in catalogue: description,
        alpha, beta, I0, g0 or g_total and an optional sweep {swept, range}.
        """
        block = self.data.get('regimes')
        if block is None:
            return
        if not isinstance(block, dict):
            self.validation_errors.append("block 'regimes' must be an object")
            return
        for name, regime in block.items():
            if name in self.registered:
                continue
            if not isinstance(regime, dict):
                self.validation_errors.append(f"regimes.{name} must be an object")
                continue
            unknown = [key for key in regime if key not in _REGIME_FIELDS]
            if unknown:
                self.validation_errors.append(f"unknown fields {unknown} in regimes.{name}")
                continue
            try:
                params = ChuaParams.from_dict({k: v for k, v in regime.items()
                                               if k in _PARAM_FIELDS})
                self.regime_manager.add_custom_regime(name, regime.get('description', name),
                                                      params, sweep=regime.get('sweep'))
            except (ValueError, TypeError, KeyError) as error:
                self.validation_errors.append(f"regimes.{name}: {error}")
                continue
            self.registered.append(name)

    def _validate_fields(self, block: str, allowed: List[str]):
        values = self.data.get(block)
        if values is None:
            return
        if not isinstance(values, dict):
            self.validation_errors.append(f"block '{block}' must be an object")
            return
        for key in values:
            if key not in allowed:
                self.validation_errors.append(f"unknown field '{block}.{key}'")

    def params(self) -> Optional[ChuaParams]:
        """Regime (or default) parameters overlaid with the params block"""
        base = self.default_params
        if 'regime' in self.data:
            base = self.regime_manager.get_params(self.data['regime'])
        block = self.data.get('params')
        if not block:
            return base
        if base is None:
            return ChuaParams.from_dict(block)
        changes = {key: float(value) for key, value in block.items()}
        return base.replace(**changes)

    def integrator(self, base: Optional[IntegratorSettings] = None) -> IntegratorSettings:
        base = base or IntegratorSettings()
        return base.replace(**self.data.get('integrator', {}))

    def thresholds(self) -> Dict[str, float]:
        return dict(self.data.get('thresholds', {}))

    def _p_base(self, block: Dict[str, Any], name: str) -> ChuaParams:
        if 'p_base' in block:
            return ChuaParams.from_dict(block['p_base'])
        p_base = self.params()
        if p_base is None:
            raise ConfigError([f"{name} needs p_base, params or a regime"])
        return p_base

    def bifurcation_spec(self) -> Optional[BifurcationSpec]:
        """BifurcationSpec from the bifurcation block; p_base defaults to params()"""
        if 'bifurcation' not in self.data:
            return None
        block = dict(self.data['bifurcation'])
        block['p_base'] = self._p_base(block, 'bifurcation')
        if 'range' not in block:
            raise ConfigError(["bifurcation needs a range"])
        block['range'] = tuple(block['range'])
        if 'ic_cold' in block:
            block['ic_cold'] = State(*block['ic_cold'])
        if 'directions' in block:
            block['directions'] = tuple(block['directions'])
        block['integrator'] = self.integrator(IntegratorSettings.for_sweeps()).replace(
            **block.get('integrator', {}))
        return BifurcationSpec(**block)

    def grid_spec(self) -> Optional[GridSpec]:
        """GridSpec from the grid block; p_base defaults to params()"""
        if 'grid' not in self.data:
            return None
        block = dict(self.data['grid'])
        block['p_base'] = self._p_base(block, 'grid')
        missing = [key for key in ('x_range', 'y_range') if key not in block]
        if missing:
            raise ConfigError([f"grid needs {key}" for key in missing])
        block['x_range'] = tuple(block['x_range'])
        block['y_range'] = tuple(block['y_range'])
        block['integrator'] = self.integrator(IntegratorSettings.for_sweeps()).replace(
            **block.get('integrator', {}))
        return GridSpec(**block)

    def circuit(self) -> Optional[CircuitSpec]:
        if 'circuit' not in self.data:
            return None
        block = self.data['circuit']
        if isinstance(block, str):
            return CircuitSpec.from_preset(block)
        return CircuitSpec.from_dict(block)
