"""
Wall separation: a point beyond the walls (outside Xi, radius at least
ell - 1) is at hyperbolic distance more than R from every point of Upsilon.

Draws are concentrated where the statement is tightest: p' uniform over a
ring of Upsilon, p within 2 phi beyond the outer edge of Xi in its own ring.
"""
import math

import numpy as np

from model.geometry import TWO_PI, angular_distance, connection_angle, reduce_angle
from model.sampler import sample_radii_between
from utils.rng import stream
from .base_audit import Audit
from .regions import build_regions


def _ring_radii(regions, level, rng, params):
    """Radii from the radial law restricted to the rings given per draw."""
    lo = regions.ell - 1.0 + level
    return sample_radii_between(lo, np.minimum(lo + 1.0, params.R), level.shape[0], rng, params)


def draw_pairs(regions, params, samples, rng):
    """(r_p, theta_p, r_q, theta_q) for `samples` draws, p outside Xi and q in Upsilon."""
    levels = regions.levels
    c = regions.theta_center
    level_q = rng.integers(0, levels, samples)
    r_q = _ring_radii(regions, level_q, rng, params)
    theta_q = c + (2.0 * rng.random(samples) - 1.0) * regions.upsilon[level_q]

    level_p = rng.integers(0, levels, samples)
    r_p = _ring_radii(regions, level_p, rng, params)
    side = np.where(rng.random(samples) < 0.5, -1.0, 1.0)
    # open interval (xi, xi + 2 phi): the boundary of Xi itself belongs to Xi
    gap = regions.xi[level_p] + 2.0 * regions.phi * (1.0 - rng.random(samples))
    theta_p = c + side * np.minimum(gap, math.pi)
    return r_p, np.asarray(reduce_angle(theta_p)), r_q, np.asarray(reduce_angle(theta_q))


def is_valid_pair(regions, p, q):
    """True iff p lies in (B_O(R) minus B_O(ell - 1)) minus Xi and q lies in Upsilon."""
    p_ok = regions.level_of(p.r) >= 0 and not regions.in_xi(p.r, p.theta)
    return bool(p_ok and regions.in_upsilon(q.r, q.theta))


def wall_separation_audit(regions, params, samples, rng=None):
    """Number of sampled pairs (p outside Xi, p' in Upsilon) with d_h(p, p') <= R."""
    if samples <= 0:
        return 0
    if rng is None:
        rng = stream(params.seed, 'audit', 'wall_separation')
    violations = 0
    chunk = 1_000_000
    for first in range(0, samples, chunk):
        size = min(chunk, samples - first)
        r_p, t_p, r_q, t_q = draw_pairs(regions, params, size, rng)
        near = np.asarray(angular_distance(t_p, t_q)) <= np.asarray(connection_angle(r_p, r_q, params.R))
        # when Xi covers the whole ring there is no p beyond the walls
        near &= ~regions.in_xi(r_p, t_p)
        violations += int(np.count_nonzero(near))
    return violations


class WallSeparationAudit(Audit):
    name = 'wall_separation'

    def check(self, ctx):
        samples = int(self.options.get('samples', 100_000))
        regions = build_regions(ctx.params, self.options.get('M', 8.0), self.options.get('beta', 0.1),
                                theta_center=ctx.rng('wall_separation_center').random() * TWO_PI)
        violations = wall_separation_audit(regions, ctx.params, samples, ctx.rng(self.name))
        return violations, samples, regions.as_dict()
