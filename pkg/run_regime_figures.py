#!/usr/bin/env python3
"""
Regime Figure Runner for HyperChua
==================================

Regenerates the data and figures of every named regime:
- phase portraits of the representative operating points
- bidirectional bifurcation diagrams of the two sweep regimes
- analytic parameter-plane maps for both signs of I0

Each regime writes into its own subdirectory of the output directory.
"""

import argparse
import logging
import os
import sys

from src.main import configure_logging, main
from src.models.describing_function import harmonic_initial_state, predicted_limit_cycles
from src.scenarios.regime_manager import RegimeManager

logger = logging.getLogger('run_regime_figures')


class RegimeFigureRunner:
    def __init__(self, output_dir: str, n_points: int, workers: int = None):
        self.output_dir = output_dir
        self.n_points = n_points
        self.workers = workers
        self.regime_manager = RegimeManager()
        self.failures = []

    def _run(self, name: str, argv: list):
        target = os.path.join(self.output_dir, name)
        status = main(argv + ['--output-dir', target])
        if status != 0:
            self.failures.append((name, status))
            logger.error(f"{name}: exit status {status}")
        else:
            logger.info(f"{name}: written to {target}")

    def _initial_flags(self, name: str) -> list:
        """Harmonic seed of the stable omega3 cycle for hidden-oscillation regimes"""
        if not name.startswith('hidden'):
            return []
        params = self.regime_manager.get_params(name)
        cycles = [c for c in predicted_limit_cycles(params) if c.stable and c.index == 3]
        if not cycles:
            return []
        s0 = harmonic_initial_state(cycles[0], params)
        return ['--x0', repr(s0.x), '--y0', repr(s0.y), '--z0', repr(s0.z)]

    def run_portraits(self):
        for name in self.regime_manager.get_available_regimes():
            if self.regime_manager.get_sweep(name) is not None:
                continue
            self._run(name, ['simulate', '--regime', name, '--transient', '200',
                             '--t', '300'] + self._initial_flags(name))

    def run_diagrams(self):
        for name in self.regime_manager.get_available_regimes():
            if self.regime_manager.get_sweep(name) is None:
                continue
            argv = ['bifurcate', '--regime', name, '--points', str(self.n_points)]
            if self.workers:
                argv += ['--workers', str(self.workers)]
            self._run(name, argv)

    def run_maps(self):
        for name in ('negative_i0_sweep', 'positive_i0_sweep'):
            self._run(f'{name}_map', ['map', '--regime', name, '--backend', 'analytic',
                                      '--workers', '1'])

    def run_all(self) -> int:
        self.run_portraits()
        self.run_diagrams()
        self.run_maps()
        if self.failures:
            logger.error(f"{len(self.failures)} runs failed: {self.failures}")
            return 1
        logger.info(f"All regimes written to {self.output_dir}")
        return 0


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument('--output-dir', default='data/output/regimes')
    parser.add_argument('--points', type=int, default=400, help='Sweep points per diagram')
    parser.add_argument('--workers', type=int, default=None)
    options = parser.parse_args()
    configure_logging('INFO')
    sys.exit(RegimeFigureRunner(options.output_dir, options.points, options.workers).run_all())
