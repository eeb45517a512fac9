"""
Figure Renderer for HyperChua
SVG figures of trajectories, Nyquist diagrams with the describing-function
locus, bifurcation diagrams and parameter-plane maps. Rendering uses the
Agg backend with a fixed hash salt and no date stamp, so identical data
gives identical files.
"""

import logging
import os
from typing import Optional, Tuple

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from config.config import FIGURES  # noqa: E402

logger = logging.getLogger(__name__)

_DIRECTION_COLORS = {'ForwardInherit': 'tab:blue', 'BackwardInherit': 'tab:red',
                     'ColdStart': 'tab:gray'}


class FigureRenderer:
    """Writes SVG figures into one output directory"""

    def __init__(self, output_dir: str):
        self.output_dir = output_dir
        self.written = []
        matplotlib.rcParams['svg.hashsalt'] = FIGURES['svg_hashsalt']
        matplotlib.rcParams['svg.fonttype'] = 'none'

    def _save(self, fig, filename: str) -> str:
        os.makedirs(self.output_dir, exist_ok=True)
        path = os.path.join(self.output_dir, filename)
        fig.savefig(path, format='svg', metadata={'Date': None})
        plt.close(fig)
        self.written.append(path)
        logger.info(f"Figure saved to {path}")
        return path

    def projection(self, states: pd.DataFrame, filename: str,
                   axes: Tuple[str, str] = ('x', 'y'), title: Optional[str] = None) -> str:
        """Phase-space projection of a recorded trajectory (columns x, y, z)"""
        horizontal, vertical = axes
        limits = FIGURES['projection_limits']
        fig, ax = plt.subplots(figsize=FIGURES['figsize'])
        ax.plot(states[horizontal], states[vertical], linewidth=0.4, color='tab:blue')
        ax.set_xlim(*limits[horizontal])
        ax.set_ylim(*limits[vertical])
        ax.set_xlabel(horizontal)
        ax.set_ylabel(vertical)
        if title:
            ax.set_title(title)
        return self._save(fig, filename)

    def poincare(self, crossings: pd.DataFrame, filename: str, title: Optional[str] = None) -> str:
        """Crossing x-values against time, one color per direction"""
        fig, ax = plt.subplots(figsize=FIGURES['figsize'])
        for direction, color in (('NegToPos', 'tab:blue'), ('PosToNeg', 'tab:red')):
            part = crossings[crossings['direction'] == direction]
            ax.scatter(part['t'], part['x'], s=FIGURES['marker_size'] * 4, color=color,
                       label=direction)
        ax.set_xlabel('t')
        ax.set_ylabel('x at y = 0')
        ax.legend(loc='upper right')
        if title:
            ax.set_title(title)
        return self._save(fig, filename)

    def nyquist(self, response: pd.DataFrame, filename: str,
                locus: Optional[pd.DataFrame] = None, intercepts: Optional[dict] = None) -> str:
        """G(j*omega) for positive and negative omega, with the -1/N(X) locus on the real axis"""
        fig, ax = plt.subplots(figsize=FIGURES['figsize'])
        ax.plot(response['re_G'], response['im_G'], color='tab:blue', linewidth=1.0,
                label='G(jw)')
        ax.plot(response['re_G'], -response['im_G'], color='tab:blue', linewidth=1.0,
                linestyle='--')
        if locus is not None:
            values = locus['locus'].to_numpy()
            finite = np.isfinite(values)
            ax.plot(values[finite], np.zeros(int(finite.sum())), color='tab:red',
                    linewidth=2.0, label='-1/N(X)')
        if intercepts:
            for name in ('p2', 'p3'):
                if intercepts.get(name) is not None:
                    ax.plot([intercepts[name]], [0.0], 'ko', markersize=3)
                    ax.annotate(name, (intercepts[name], 0.0), textcoords='offset points',
                                xytext=(3, 5))
        ax.axhline(0.0, color='black', linewidth=0.5)
        ax.axvline(0.0, color='black', linewidth=0.5)
        ax.set_xlabel('Re')
        ax.set_ylabel('Im')
        ax.legend(loc='lower left')
        return self._save(fig, filename)

    def bifurcation(self, diagram_frame: pd.DataFrame, filename: str, swept: str,
                    origin_branch: Optional[pd.DataFrame] = None) -> str:
        """Crossing x-values against the swept parameter, colored by sweep direction"""
        fig, ax = plt.subplots(figsize=FIGURES['figsize'])
        for direction, part in diagram_frame.groupby('direction', sort=False):
            part = part.dropna(subset=['x_crossing'])
            ax.scatter(part['swept_value'], part['x_crossing'], s=FIGURES['marker_size'],
                       color=_DIRECTION_COLORS.get(direction, 'black'), label=direction)
        if origin_branch is not None and len(origin_branch):
            stable = origin_branch['stable'].to_numpy(dtype=bool)
            values = origin_branch['swept_value'].to_numpy()
            ax.plot(np.where(stable, values, np.nan), np.zeros(len(values)), color='black',
                    linewidth=1.0)
            ax.plot(np.where(stable, np.nan, values), np.zeros(len(values)), color='black',
                    linewidth=1.0, linestyle='--')
        ax.set_xlabel(swept)
        ax.set_ylabel('x at y = 0')
        ax.legend(loc='upper right', markerscale=8)
        return self._save(fig, filename)

    def parameter_plane(self, codes: np.ndarray, labels, x_range: Tuple[float, float],
                        y_range: Tuple[float, float], filename: str,
                        x_axis: str, y_axis: str) -> str:
        """Heat map of label codes with one legend entry per distinct label"""
        colors = plt.get_cmap('tab20')(np.arange(max(len(labels), 1)) % 20)
        fig, ax = plt.subplots(figsize=FIGURES['figsize'])
        ax.imshow(codes, origin='lower', aspect='auto', interpolation='nearest',
                  cmap=ListedColormap(colors), vmin=-0.5, vmax=len(labels) - 0.5,
                  extent=(x_range[0], x_range[1], y_range[0], y_range[1]))
        for code, label in enumerate(labels):
            ax.plot([], [], 's', color=colors[code], label=label)
        ax.set_xlabel(x_axis)
        ax.set_ylabel(y_axis)
        ax.legend(loc='upper left', bbox_to_anchor=(1.0, 1.0), fontsize='small')
        fig.tight_layout()
        return self._save(fig, filename)
