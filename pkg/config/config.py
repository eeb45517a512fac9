"""
Configuration file for the HyperChua modeling system
Defaults for the hyperbolic (sinh) Chua circuit: model limits, describing
function settings, integrator and classifier thresholds, sweep options,
named parameter regimes and the circuit/diode catalogue.
"""

# Model limits
MODEL_LIMITS = {
    'sinh_overflow': 700.0,          # |x| beyond this raises DivergedError
    'blowup_x': 20.0,                # |x| beyond this while moving outward is a finite-time blow-up
    'equilibrium_residual': 1e-9,    # |f(s)| accepted as an equilibrium
    'equilibrium_bracket': (1e-8, 50.0),
    'equilibrium_bracket_max': 700.0,
    'equilibrium_xtol': 1e-12,
}

# Describing function (power series, Bessel closed form, quadrature)
DESCRIBING_FUNCTION = {
    'series_rtol': 1e-16,
    'series_max_terms': 200,
    'quadrature_rtol': 1e-13,
    'quadrature_limit': 200,
    'root_xtol': 1e-14,
    'locus_zero_tol': 1e-12,         # |N(X)| relative to |g0| + |I0|*S(X) treated as zero
    'pole_tol': 1e-14,               # |den(j*omega)| relative to its term magnitudes
    'amplitude_max': 700.0,
    'nyquist_omega_min': 1e-2,
    'nyquist_omega_max': 1e2,
    'nyquist_points': 400,
    'df_points': 200,
}

# Numerical integration
INTEGRATOR_DEFAULTS = {
    'method': 'RK45',                # 'RK45', 'DOP853' or 'RK4'
    'step': 1e-3,                    # RK4 fixed step
    'rtol': 1e-9,
    'atol': 1e-12,
    'max_step': float('inf'),
    't_transient': 500.0,
    't_sample': 500.0,
    'divergence_radius': 1e6,
    'record_interval': None,
}

# Poincare section y = 0
CROSSING = {
    'time_tol': 1e-12,
    'y_tol': 1e-10,
}

# Lyapunov spectrum and attractor classification
LYAPUNOV = {
    'renorm_interval': 1.0,
    'flow_exponent_tol': 0.01,
}

CLASSIFIER = {
    'chaos_threshold': 0.01,
    'periodic_threshold': 0.005,
    'cluster_radius': 1e-3,
    'fixed_point_tol': 1e-6,
    'max_period': 64,
}

# Bifurcation diagrams and parameter-plane maps
SWEEP_DEFAULTS = {
    'swept': 'g0',
    'n_points': 200,
    'directions': ('ForwardInherit', 'BackwardInherit'),
    'ic_cold': (0.01, 0.0, 0.0),
    'inherit_perturbation': 1e-6,
    't_transient_inherit': 100.0,
    'lyapunov_time': 200.0,
    'segment_points': 25,            # inherited chains run as independent segments of this length
    'ics_per_cell': 4,
    'near_origin': 0.01,
    'near_equilibrium': 0.1,
    'probe_predicted_cycles': True,
    'seed': 0,
    'workers': None,                 # None -> os.cpu_count()
}

# Integrator overrides for sweep points and map cells
SWEEP_INTEGRATOR = {
    'rtol': 1e-7,
    'atol': 1e-9,
    't_sample': 200.0,
}

SWEEPABLE = ('g0', 'g_total', 'alpha', 'beta', 'I0')

MAP_DEFAULTS = {
    'x_axis': 'g_total',
    'y_axis': 'beta',
    'x_range': (-2.0, 1.0),
    'y_range': (10.5, 30.0),
    'nx': 60,
    'ny': 40,
}

# Command line
CLI_DEFAULTS = {
    'regime': 'double_scroll',        # fills parameters not given otherwise
    'initial_state': (0.01, 0.0, 0.0),
    'simulate_transient': 0.0,
    'simulate_time': 1000.0,
    'df_xmax': 10.0,
    'circuit': 'circuit2',
    'log_format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
}

# Named regimes (g0 = g_total - I0)
PARAMETER_REGIMES = {
    'negative_i0_sweep': {
        'description': 'Bidirectional diagram, (g0+I0)I0 > 0',
        'alpha': 10.0, 'beta': 20.0, 'I0': -0.7875, 'g_total': -0.75,
        'sweep': {'swept': 'g_total', 'range': (-1.0, 0.0)},
    },
    'omega2_cycle': {'description': 'Single omega2 limit cycle',
              'alpha': 10.0, 'beta': 20.0, 'I0': -0.7875, 'g_total': -0.75},
    'split_cycles': {'description': 'Pitchfork-split omega2 cycles',
              'alpha': 10.0, 'beta': 20.0, 'I0': -0.7875, 'g_total': -0.7},
    'period_two': {'description': 'Period-two attractors',
              'alpha': 10.0, 'beta': 20.0, 'I0': -0.7875, 'g_total': -0.687},
    'single_scrolls': {'description': 'Chaotic single scrolls',
              'alpha': 10.0, 'beta': 20.0, 'I0': -0.7875, 'g_total': -0.682},
    'scroll_crisis': {'description': 'Enlarged single scrolls after crisis',
              'alpha': 10.0, 'beta': 20.0, 'I0': -0.7875, 'g_total': -0.68},
    'merged_scroll': {'description': 'Merged chaotic single scroll',
              'alpha': 10.0, 'beta': 20.0, 'I0': -0.7875, 'g_total': -0.676},
    'positive_i0_sweep': {
        'description': 'Bidirectional diagram, (g0+I0)I0 < 0',
        'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.07,
        'sweep': {'swept': 'g_total', 'range': (-1.2, 0.0)},
    },
    'origin_rescue': {'description': 'Origin after rescue',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -0.99},
    'equilibria_pm': {'description': 'Stable equilibria +-P1',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.005},
    'omega2_onset': {'description': 'Self-excited omega2 oscillations',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.017},
    'twin_rossler': {'description': 'Twin Rossler-type attractors',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.04},
    'double_scroll': {'description': 'Double scroll',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.07},
    'periodic_window': {'description': 'Periodic window',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.09},
    'twin_periodic': {'description': 'Twin periodic oscillations',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.12},
    'twin_periodic_wide': {'description': 'Twin periodic oscillations',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.16},
    'hidden_omega3': {'description': 'Hidden omega3 oscillation',
              'alpha': 10.0, 'beta': 13.3, 'I0': 0.0003, 'g_total': -1.18},
}

# Semiconductor devices (Shockley parameters)
DIODES = {
    '1N4007': {'i_s': 7.061e-9, 'eta': 1.808},
    '1N5819': {'i_s': 11.928e-6, 'eta': 1.165},
}

THERMAL_VOLTAGE = 0.026  # volts at room temperature

# Circuit presets (SI units); kappa is the signed sinh gain of the converter
CIRCUITS = {
    'circuit1': {
        'description': 'Inductorless circuit, Schottky NIC, (g0+I0)I0 > 0',
        'R': 1e3, 'C1': 100e-9, 'C2': 1e-6, 'L': 50e-3, 'g_p': 1.0 / 470e3,
        'kappa': -5.0,
        'diode': {'part': '1N5819', 'm': 5, 'l': 1},
    },
    'circuit2': {
        'description': 'Inductorless circuit, passive 1N4007 pair, (g0+I0)I0 < 0',
        'R': 1e3, 'C1': 100e-9, 'C2': 1e-6, 'L': 75e-3, 'g_p': -1.07e-3,
        'kappa': 1.0,
        'diode': {'part': '1N4007', 'm': 1, 'l': 1},
    },
    'circuit2_fast': {
        'description': 'High-speed variant, same dimensionless parameters',
        'R': 1e3, 'C1': 470e-12, 'C2': 4.7e-9, 'L': 352.5e-6, 'g_p': -1.07e-3,
        'kappa': 1.0,
        'diode': {'part': '1N4007', 'm': 1, 'l': 1},
    },
}

# File Paths
FILE_PATHS = {
    'output_dir': 'data/output/',
    'output_dir_env': 'CHUA_OUTPUT_DIR',
    'failure_file': 'failure.json',
}

# SVG rendering
FIGURES = {
    'svg_hashsalt': 'hyperchua',
    'figsize': (6.0, 4.5),
    'projection_limits': {'x': (-15.0, 15.0), 'y': (-3.0, 3.0), 'z': (-20.0, 20.0)},
    'marker_size': 0.5,
}
