"""
Scaling-law fits of the second-largest component.

Per expected size n the statistic is the median L2 over trials. Two
regressions of ln(median L2) are offered:
- loglog:     against ln ln n  (L2 ~ (ln n)^slope)
- polynomial: against ln n     (L2 ~ n^slope)

Cells whose median L2 is 0 have no logarithm and are left out of the fit.

Called by:
- app.py: `fit` subcommand
- tests: trend checks on scan output
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.stats import linregress

from utils.errors import FitError, ParameterError

logger = logging.getLogger(__name__)

FIT_MODES = {
    'loglog': lambda n: np.log(np.log(n)),
    'polynomial': np.log,
}


@dataclass(frozen=True)
class FitResult:
    """Least-squares slope and intercept; residual is the RMS of the log residuals."""
    mode: str
    slope: float
    intercept: float
    residual: float
    stderr: float
    medians: dict

    def lower_confidence(self, z=2.0):
        """slope - z * stderr."""
        return self.slope - z * self.stderr

    def as_dict(self):
        return {'mode': self.mode, 'slope': self.slope, 'intercept': self.intercept,
                'residual': self.residual, 'stderr': self.stderr,
                'medians': {float(k): float(v) for k, v in self.medians.items()}}


def as_frame(records):
    """Accept a DataFrame, TrialRecords or row dicts."""
    if isinstance(records, pd.DataFrame):
        return records
    rows = [r.as_row() if hasattr(r, 'as_row') else dict(r) for r in records]
    return pd.DataFrame(rows)


def medians_by_n(records, column='L2'):
    """Median of `column` per n, ascending in n."""
    frame = as_frame(records)
    if frame.empty:
        return pd.Series(dtype=float)
    return frame.groupby('n')[column].median().sort_index()


def fit_l2_exponent(records, mode='loglog'):
    """Regress ln(median L2) on the transform of n chosen by `mode`."""
    if mode not in FIT_MODES:
        raise ParameterError(f"unknown fit mode '{mode}', choose from {sorted(FIT_MODES)}")
    frame = as_frame(records)
    cell_columns = [c for c in ('alpha', 'nu') if c in frame.columns]
    if cell_columns and frame[cell_columns].drop_duplicates().shape[0] > 1:
        raise FitError("records mix several (alpha, nu) cells; fit one cell line at a time")
    medians = medians_by_n(frame)
    usable = medians[medians > 0]
    if usable.shape[0] < 3:
        raise FitError(f"need at least 3 distinct n with positive median L2, got {usable.shape[0]}")

    x = FIT_MODES[mode](usable.index.to_numpy(dtype=float))
    y = np.log(usable.to_numpy(dtype=float))
    fit = linregress(x, y)
    residual = float(np.sqrt(np.mean((y - (fit.slope * x + fit.intercept)) ** 2)))
    result = FitResult(mode, float(fit.slope), float(fit.intercept), residual, float(fit.stderr),
                       {float(k): float(v) for k, v in medians.items()})
    logger.info("fit_l2_exponent(): mode=%s slope=%.4f +- %.4f over %d n values",
                mode, result.slope, result.stderr, usable.shape[0])
    return result


def ratio_spread(medians, scale):
    """max/min over n of median / scale(n); inf if some median is 0."""
    ratios = np.asarray([m / scale(n) for n, m in medians.items()], dtype=float)
    if ratios.size == 0:
        return math.nan
    if np.any(ratios <= 0):
        return math.inf
    return float(ratios.max() / ratios.min())


def is_strictly_increasing(values):
    values = np.asarray(list(values), dtype=float)
    return bool(np.all(np.diff(values) > 0))
