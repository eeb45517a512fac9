"""
Report Writer for HyperChua
Writes result tables as CSV with round-trip float formatting, result
objects as JSON, and the failure report of a numerical error.
"""

import json
import logging
import math
import os
from typing import Any, Optional

import numpy as np
import pandas as pd

from config.config import FILE_PATHS
from src.exceptions import DivergedError, StiffnessError

logger = logging.getLogger(__name__)


def default_output_dir() -> str:
    """Output directory from the environment, else the configured default"""
    return os.environ.get(FILE_PATHS['output_dir_env']) or FILE_PATHS['output_dir']


def format_float(value: float) -> str:
    """Shortest decimal text that reads back to the same double"""
    return repr(float(value))


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays, tuples and non-finite floats for json.dump"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    return value


class ReportWriter:
    """Writes the artifacts of one run into a single output directory"""

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = output_dir or default_output_dir()
        self.written = []

    def _path(self, filename: str) -> str:
        os.makedirs(self.output_dir, exist_ok=True)
        return os.path.join(self.output_dir, filename)

    def write_csv(self, df: pd.DataFrame, filename: str) -> str:
        """Export a DataFrame; floats keep full round-trip precision

        Args:
            df: Table to export
            filename: File name inside the output directory

        Returns:
            Path of the written file
        """
        path = self._path(filename)
        df.to_csv(path, index=False, float_format=format_float, lineterminator='\n')
        self.written.append(path)
        logger.info(f"Results exported to {path} ({len(df)} rows)")
        return path

    def write_json(self, payload: Any, filename: str) -> str:
        path = self._path(filename)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(to_jsonable(payload), handle, indent=2, sort_keys=False)
            handle.write('\n')
        self.written.append(path)
        logger.info(f"Results exported to {path}")
        return path

    def write_failure(self, error: Exception) -> str:
        """failure.json with the error message, type, and t/state when known"""
        payload = {'error': str(error), 'type': type(error).__name__, 't': None, 'state': None}
        if isinstance(error, (DivergedError, StiffnessError)):
            payload['t'] = error.t
            payload['state'] = error.state
        return self.write_json(payload, FILE_PATHS['failure_file'])
