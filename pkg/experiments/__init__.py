"""
rhgTool experiments package.
Scans over model grids, record persistence and scaling-law fits.
"""

from .scan import ScanConfig, TrialRecord, run_trial, run_scan, COLUMNS
from .record_queue import ReorderQueue
from .record_writer import write_records, read_records, get_writer
from .fitting import FitResult, fit_l2_exponent, medians_by_n, ratio_spread, is_strictly_increasing
from .presets import boundary_preset, preset_config
