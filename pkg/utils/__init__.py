"""
Utility functions for the rhgTool project.
"""

from .status import update_status, set_progress_bar
from .system_info import get_computer_name, run_metadata
from .memory import max_workers_for, format_size
from .rng import stream, trial_seed
__all__ = ['update_status', 'set_progress_bar', 'get_computer_name', 'run_metadata',
           'max_workers_for', 'format_size', 'stream', 'trial_seed']
