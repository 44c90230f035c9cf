"""
Pre-component detection over all sectors of one instance.

The disk is cut into sectors of width psi_eff = max(psi, 2 xi[0]), each the
centre of its own copy of the lower-bound regions. Per sector we record
whether

    (i)   all SUBSECTORS parts of the innermost Upsilon ring hold a vertex,
    (ii)  Xi minus Upsilon holds no vertex,
    (iii) no vertex of Upsilon has a neighbour in B_O(ell - 1).

(ii) and (iii) are only evaluated, and counted, for sectors meeting (i).
When all three hold, the wall statement forces every neighbour of an
Upsilon vertex to lie in Upsilon; a sector where this fails is a violation.
The components touching such an isolated Upsilon are small components of G,
and the largest of them is reported.
"""
import logging
import math

import numpy as np

from model.geometry import TWO_PI, angular_distance
from .base_audit import Audit
from .regions import build_regions

logger = logging.getLogger(__name__)


def sector_centers(regions):
    """Bisectors of the psi_eff sectors and the width psi_eff itself."""
    width = max(regions.psi, 2.0 * float(regions.xi[0]))
    count = max(1, int(math.floor(TWO_PI / width)))
    width = TWO_PI / count
    return (np.arange(count) + 0.5) * width, width


def subsector_edges(regions):
    """Boundaries of regions.subsectors() as angles relative to the sector centre, ascending."""
    parts = regions.subsectors()
    mids = np.asarray([p.theta_center for p in parts]) - regions.theta_center
    mids = np.remainder(mids + math.pi, TWO_PI) - math.pi
    halves = np.asarray([p.half_angle for p in parts])
    return np.append(mids - halves, mids[-1] + halves[-1])


def _occupied_subsectors(regions, ps, centers):
    """Boolean array: every subsector of the innermost Upsilon ring is occupied, per centre."""
    lo, hi = regions.ring(0)
    inner = (ps.r >= lo) & (ps.r < hi)
    angles = np.sort(ps.theta[inner])
    if angles.size == 0:
        return np.zeros(len(centers), dtype=bool)
    extended = np.concatenate([angles - TWO_PI, angles, angles + TWO_PI])
    edges = centers[:, None] + subsector_edges(regions)[None, :]
    positions = np.searchsorted(extended, edges, side='left')
    return np.all(np.diff(positions, axis=1) > 0, axis=1)


def scan_sector(regions, g, cs, center, candidates):
    """Outcome flags of one sector; `candidates` are vertex ids within reach of the sector."""
    ps = g.points
    r, theta = ps.r[candidates], ps.theta[candidates]
    in_up = regions.in_upsilon(r, theta, center)
    in_xi = regions.in_xi(r, theta, center)
    upsilon_ids = candidates[in_up]
    wall_empty = not np.any(in_xi & ~in_up)

    member = np.zeros(g.vertex_count, dtype=bool)
    member[upsilon_ids] = True
    neighbours = [g.neighbors(v) for v in upsilon_ids]
    neighbours = np.concatenate(neighbours) if neighbours else np.empty(0, dtype=np.int64)
    no_inner = not np.any(ps.r[neighbours] < regions.ell - 1.0)
    leaks = bool(np.any(~member[neighbours]))

    lo, hi = regions.ring(0)
    innermost = upsilon_ids[(ps.r[upsilon_ids] >= lo) & (ps.r[upsilon_ids] < hi)]
    labels = np.unique(cs.labels[innermost]) if innermost.size else np.empty(0, dtype=np.int64)
    size = int(np.isin(cs.labels, labels).sum()) if labels.size else 0
    return wall_empty, no_inner, leaks, size


def precomponent_audit(regions, g, cs):
    """(violations, sectors, details) of the pre-component scan."""
    ps = g.points
    centers, width = sector_centers(regions)
    occupied = _occupied_subsectors(regions, ps, centers)

    reach = float(np.max(regions.xi))
    outer = np.flatnonzero(ps.r >= regions.ell - 1.0)
    order = outer[np.argsort(ps.theta[outer], kind='stable')]
    sorted_theta = ps.theta[order]

    counts = {'occupied': int(occupied.sum()), 'walls_empty': 0, 'no_inner_neighbour': 0, 'isolated': 0}
    violations = 0
    largest = 0
    for center in centers[occupied]:
        # vertices within `reach` of the centre, with wrap-around
        lo = np.searchsorted(sorted_theta, center - reach, side='left')
        hi = np.searchsorted(sorted_theta, center + reach, side='right')
        parts = [order[max(lo, 0):hi]]
        if center - reach < 0:
            parts.append(order[np.searchsorted(sorted_theta, center - reach + TWO_PI):])
        if center + reach >= TWO_PI:
            parts.append(order[:np.searchsorted(sorted_theta, center + reach - TWO_PI, side='right')])
        candidates = np.unique(np.concatenate(parts))
        candidates = candidates[np.asarray(angular_distance(ps.theta[candidates], center)) <= reach]

        wall_empty, no_inner, leaks, size = scan_sector(regions, g, cs, center, candidates)
        counts['walls_empty'] += int(wall_empty)
        counts['no_inner_neighbour'] += int(no_inner)
        if wall_empty and no_inner:
            counts['isolated'] += 1
            if leaks:
                violations += 1
            else:
                largest = max(largest, size)

    details = {**counts, 'sectors': len(centers), 'sector_width': width,
               'largest_isolated_component': largest, **regions.as_dict()}
    logger.debug("precomponent_audit(): %s", counts)
    return violations, len(centers), details


class PrecomponentsAudit(Audit):
    name = 'precomponents'

    def check(self, ctx):
        regions = build_regions(ctx.params, self.options.get('M', 8.0), self.options.get('beta', 0.1))
        return precomponent_audit(regions, ctx.graph, ctx.components)
