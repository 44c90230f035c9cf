"""
Boundary presets for the two ends of the alpha range.

- half: alpha = 1/2, where L2 grows like ln n for small nu and the graph
  is connected once nu >= pi
- one:  alpha = 1, where L2 grows polynomially in n

Grids live in presets.json next to this module.
"""
import json
import logging
from pathlib import Path

from utils.errors import ParameterError, RecordIOError
from .scan import ScanConfig, run_scan

logger = logging.getLogger(__name__)

PRESETS_PATH = Path(__file__).parent / 'presets.json'

# ScanConfig fields a base config passes on to a preset; the grids come from the preset.
INHERITED_FIELDS = ('trials', 'master_seed', 'builder', 'out', 'format', 'ge_thresholds',
                    'timing', 'workers', 'n_cap')


def load_presets(path=PRESETS_PATH):
    try:
        with open(path, 'r') as file:
            return json.load(file)
    except (OSError, json.JSONDecodeError) as e:
        raise RecordIOError(path, f"cannot load presets: {e}") from e


def preset_config(case, nu=None, n_grid=None, **overrides):
    """
    ScanConfig of preset `case` ('half' or 'one').

    `nu` replaces the preset's nu (e.g. nu = 4 for the connectivity check);
    other ScanConfig fields may be overridden by keyword.
    """
    presets = load_presets()
    if case not in presets:
        raise ParameterError(f"unknown preset '{case}', choose from {sorted(presets)}")
    preset = presets[case]
    values = {
        'n_grid': n_grid or preset['n'],
        'alpha_grid': [preset['alpha']],
        'nu_grid': [preset['nu'] if nu is None else nu],
        'trials': preset['trials'],
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    logger.debug("preset_config(): %s -> %s", case, values)
    return ScanConfig(**values)


def boundary_preset(case, config=None, nu=None, progress=True):
    """Run preset `case`, taking trials, seed, builder and output settings from `config` when given."""
    overrides = {}
    if config is not None:
        overrides = {name: getattr(config, name) for name in INHERITED_FIELDS}
    return run_scan(preset_config(case, nu=nu, **overrides), progress=progress)

