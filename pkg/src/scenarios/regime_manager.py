"""
Regime Manager for HyperChua
Manages the named parameter regimes: the two bidirectional sweeps and the
representative operating points along them.
"""

import copy
import logging
from typing import Any, Dict, List, Optional

import pandas as pd

from config.config import PARAMETER_REGIMES
from src.models.chua_model import ChuaParams
from src.models.describing_function import classify_region
from src.scenarios.bifurcation import BifurcationSpec

logger = logging.getLogger(__name__)

_PARAM_KEYS = ('alpha', 'beta', 'I0', 'g_total')


class RegimeManager:
    def __init__(self, regimes: Optional[Dict[str, Dict[str, Any]]] = None):
        self.regimes = copy.deepcopy(PARAMETER_REGIMES if regimes is None else regimes)

    def get_available_regimes(self) -> List[str]:
        """Get list of available regimes"""
        return list(self.regimes.keys())

    def _regime(self, regime_name: str) -> Dict[str, Any]:
        if regime_name not in self.regimes:
            raise ValueError(f"Regime {regime_name} not found, available: "
                             f"{', '.join(self.get_available_regimes())}")
        return self.regimes[regime_name]

    def get_regime_description(self, regime_name: str) -> str:
        """Get description of a specific regime"""
        return self._regime(regime_name)['description']

    def get_params(self, regime_name: str) -> ChuaParams:
        """Parameter set of a regime; g0 is derived as g_total - I0"""
        regime = self._regime(regime_name)
        return ChuaParams.from_dict({key: regime[key] for key in _PARAM_KEYS})

    def get_sweep(self, regime_name: str) -> Optional[Dict[str, Any]]:
        """Sweep block (swept, range) of a regime, or None for a single point"""
        sweep = self._regime(regime_name).get('sweep')
        return dict(sweep) if sweep is not None else None

    def bifurcation_spec(self, regime_name: str, **overrides) -> BifurcationSpec:
        """BifurcationSpec of a sweep regime, with keyword overrides

        Raises:
            ValueError: if the regime defines no sweep
        """
        sweep = self.get_sweep(regime_name)
        if sweep is None:
            raise ValueError(f"Regime {regime_name} defines no sweep")
        fields = {'p_base': self.get_params(regime_name), 'swept': sweep['swept'],
                  'range': tuple(sweep['range'])}
        fields.update(overrides)
        return BifurcationSpec(**fields)

    def validate_regime(self, regime_name: str) -> bool:
        """Validate if a regime is properly configured"""
        if regime_name not in self.regimes:
            return False
        regime = self.regimes[regime_name]
        if not all(key in regime for key in ('description',) + _PARAM_KEYS):
            return False
        try:
            self.get_params(regime_name)
            if 'sweep' in regime:
                self.bifurcation_spec(regime_name)
        except (ValueError, KeyError, TypeError) as error:
            logger.warning(f"Regime {regime_name} is invalid: {error}")
            return False
        return True

    def add_custom_regime(self, name: str, description: str, params: ChuaParams,
                          sweep: Optional[Dict[str, Any]] = None):
        """Add a custom regime to the manager"""
        if name in self.regimes:
            raise ValueError(f"Regime {name} already exists")
        regime = {'description': description, 'alpha': params.alpha, 'beta': params.beta,
                  'I0': params.I0, 'g_total': params.g_total}
        if sweep is not None:
            regime['sweep'] = dict(sweep)
        self.regimes[name] = regime
        if not self.validate_regime(name):
            del self.regimes[name]
            raise ValueError(f"Regime {name} is not a valid configuration")
        logger.info(f"Custom regime '{name}' added")

    def get_regime_summary(self) -> pd.DataFrame:
        """Get summary of all regimes with their predicted region"""
        summary_data = []
        for name, regime in self.regimes.items():
            params = self.get_params(name)
            sweep = regime.get('sweep')
            summary_data.append({
                'Regime': name,
                'Description': regime['description'],
                'alpha': params.alpha,
                'beta': params.beta,
                'I0': params.I0,
                'g0': params.g0,
                'g_total': params.g_total,
                'Region': classify_region(params).label,
                'Sweep': 'None' if sweep is None else f"{sweep['swept']} over {tuple(sweep['range'])}",
            })
        return pd.DataFrame(summary_data)

    def compare_regimes(self, regime_names: List[str]) -> Dict[str, Any]:
        """Parameters and predicted region of several regimes, and the fields that differ"""
        if not regime_names:
            raise ValueError("No regimes specified for comparison")
        params = {}
        regions = {}
        for name in regime_names:
            if name in self.regimes:
                regime_params = self.get_params(name)
                params[name] = regime_params.to_dict()
                regions[name] = classify_region(regime_params).label
            else:
                logger.warning(f"Regime {name} not found")

        differences = {}
        if len(params) >= 2:
            for key in ('alpha', 'beta', 'I0', 'g0', 'g_total'):
                values = {name: p[key] for name, p in params.items()}
                if len(set(values.values())) > 1:
                    differences[key] = values
        return {'regimes': list(params), 'params': params, 'regions': regions,
                'differences': differences}
