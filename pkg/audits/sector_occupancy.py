"""
Sector occupancy: every window of angle 2 phi, phi = (L'/n) (ln n)^{1/(1-alpha)},
holds a vertex of the band (ell - 1, ell].

Windows start at the multiples of phi, so there are ceil(2 pi / phi) of them;
a window wraps around 2 pi.
"""
import math

import numpy as np

from model.geometry import TWO_PI
from .base_audit import Audit
from .regions import check_alpha, upper_bound_ell


def occupancy_angle(params, Lp):
    return Lp / params.n * math.log(params.n) ** (1.0 / (1.0 - params.alpha))


def empty_windows(angles, phi):
    """Number of aligned 2 phi windows containing none of `angles`."""
    if phi >= TWO_PI:
        return 0 if len(angles) else 1
    count = int(math.ceil(TWO_PI / phi))
    if len(angles) == 0:
        return count
    angles = np.sort(np.asarray(angles, dtype=float))
    extended = np.concatenate([angles, angles + TWO_PI])
    starts = np.arange(count) * phi
    hits = np.searchsorted(extended, starts + 2.0 * phi, side='right') - np.searchsorted(extended, starts, side='left')
    return int(np.count_nonzero(hits == 0))


def sector_occupancy_audit(g, L, Lp):
    """Number of aligned 2 phi windows without a vertex of radius in (ell - 1, ell]."""
    params = g.points.params
    check_alpha(params)
    ell, _, _ = upper_bound_ell(params, L)
    r = g.points.r
    band = (r > ell - 1) & (r <= ell)
    return empty_windows(g.points.theta[band], occupancy_angle(params, Lp))


class SectorOccupancyAudit(Audit):
    name = 'sector_occupancy'

    def check(self, ctx):
        L = float(self.options.get('L', 20.0))
        Lp = float(self.options.get('Lp', 20.0))
        phi = occupancy_angle(ctx.params, Lp)
        ell, raw, clamped = upper_bound_ell(ctx.params, L)
        violations = sector_occupancy_audit(ctx.graph, L, Lp)
        windows = 1 if phi >= TWO_PI else int(math.ceil(TWO_PI / phi))
        return violations, windows, {'ell': ell, 'ell_unclamped': raw, 'clamped': clamped, 'phi': phi}
