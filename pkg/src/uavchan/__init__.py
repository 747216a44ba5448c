"""Analytical UAV-to-vehicle path loss in ITU-R P.1410 built-up areas."""

from .geometry import (LinkGeometry, MultipathBreakdown, SideProfile, analyze_link,
                       critical_altitude, facade_hit_test, ground_reflection_length,
                       los_distance, reflection_midpoint, wall_reflection_length)
from .pathloss import (PathLossSample, RadioConfig, coherent_path_loss, fspl,
                       path_loss_bu, phase_difference, sweep_horizontal, sweep_vertical)
from .scenario import (BuiltUpParams, ConstantHeights, GridLayout, HeightField, Preset,
                       derive_grid, fit_rayleigh, preset_params, rayleigh_pdf, sample_heights)
from .stats import NormalFit, ecdf, normal_fit, summarize_sweep

__version__ = "0.1.0"
