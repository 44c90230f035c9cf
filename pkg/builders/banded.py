"""
Band/sector bucketed builder.

Points are split into unit-width radial bands counted down from R (the bottom
band absorbs the fractional remainder) and, within each band, sorted by angle
and grouped into equal angular buckets. Two points of bands i and j can only
be adjacent if their angular distance is at most the connection angle of the
two bands' inner radii, since the connection angle decreases in each radius.
For every band pair a point therefore scans a contiguous, wrap-around run of
buckets instead of the whole band.

Candidate runs are expanded into flat index arrays with np.repeat, so the
whole construction is a handful of vectorized passes per band pair.

Called by:
- builders/builder_manager.py: registered as 'banded'
- audits/base_audit.py: the builder AuditContext uses
- experiments/scan.py: the default scan builder
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from model.geometry import TWO_PI, adjacent, connection_angle
from .base_builder import GraphBuilder

logger = logging.getLogger(__name__)

# Inner radii below this are clamped before computing pruning angles;
# theta_exact needs positive radii. Every pair involving the bottom band is
# scanned in full anyway because its connection angle is pi.
MIN_PRUNE_RADIUS = 0.1

# Relative and absolute padding of pruning angles, well above rounding error.
ANGLE_PAD = 1e-9


def band_boundaries(R):
    """Radii 0 < R - floor(R) + 1 < ... < R - 1 < R delimiting the unit bands."""
    bands = max(int(math.floor(R)), 1)
    upper = R - np.arange(bands - 1, -1, -1, dtype=float)
    return np.concatenate([[0.0], upper])


def _pruning_angle(rho_i, rho_j, R):
    angle = connection_angle(max(rho_i, MIN_PRUNE_RADIUS), max(rho_j, MIN_PRUNE_RADIUS), R)
    return min(math.pi, angle * (1.0 + ANGLE_PAD) + ANGLE_PAD)


@dataclass(frozen=True, eq=False)
class BandGrid:
    """
    Assignment of every point to one (band, bucket) cell.

    Members of band b are order[band_start[b]:band_start[b + 1]], ascending
    in angle; within a band, bucket c holds the members at relative offsets
    bucket_starts[b][c]:bucket_starts[b][c + 1]. Bucket widths 2 pi / k are at
    least the band's pruning angle against itself.

    Example usage:
        grid = BandGrid.build(ps)
        grid.band_count, grid.members(grid.band_count - 1)
    """
    R: float
    bounds: np.ndarray
    band_of: np.ndarray
    bucket_of: np.ndarray
    order: np.ndarray
    band_start: np.ndarray
    bucket_count: np.ndarray
    bucket_starts: tuple

    @classmethod
    def build(cls, ps):
        R = ps.params.R
        bounds = band_boundaries(R)
        nb = len(bounds) - 1
        band_of = np.clip(np.searchsorted(bounds, ps.r, side='right') - 1, 0, nb - 1).astype(np.int64)
        order = np.lexsort((ps.theta, band_of)).astype(np.int64)
        band_start = np.zeros(nb + 1, dtype=np.int64)
        np.cumsum(np.bincount(band_of, minlength=nb), out=band_start[1:])

        bucket_of = np.zeros(ps.count, dtype=np.int64)
        bucket_count = np.ones(nb, dtype=np.int64)
        bucket_starts = []
        for b in range(nb):
            ids = order[band_start[b]:band_start[b + 1]]
            angle = _pruning_angle(bounds[b], bounds[b], R)
            k = 1 if angle >= math.pi else max(1, int(math.floor(TWO_PI / angle)))
            k = min(k, max(len(ids), 1))
            width = TWO_PI / k
            cells = np.minimum((ps.theta[ids] / width).astype(np.int64), k - 1)
            bucket_of[ids] = cells
            starts = np.zeros(k + 1, dtype=np.int64)
            np.cumsum(np.bincount(cells, minlength=k), out=starts[1:])
            bucket_count[b] = k
            bucket_starts.append(starts)

        grid = cls(R, bounds, band_of, bucket_of, order, band_start, bucket_count, tuple(bucket_starts))
        logger.debug("BandGrid.build(): %d points in %d bands, %d buckets", ps.count, nb, int(bucket_count.sum()))
        return grid

    @property
    def band_count(self):
        return len(self.bounds) - 1

    def members(self, b):
        """Point ids of band b, ascending in angle."""
        return self.order[self.band_start[b]:self.band_start[b + 1]]

    def inner_radius(self, b):
        return float(self.bounds[b])

    def candidate_runs(self, b, theta, half_angle):
        """
        Start and end positions, in the wrap-around extended order of band b,
        of the members within half_angle of each angle in theta.

        Position p stands for member p mod m of the band; a run never exceeds
        m positions, so it lists every member at most once.
        """
        m = int(self.band_start[b + 1] - self.band_start[b])
        theta = np.asarray(theta, dtype=float)
        if m == 0:
            zero = np.zeros(theta.shape, dtype=np.int64)
            return zero, zero
        k = int(self.bucket_count[b])
        if half_angle >= math.pi or k == 1:
            return np.zeros(theta.shape, dtype=np.int64), np.full(theta.shape, m, dtype=np.int64)
        width = TWO_PI / k
        starts = self.bucket_starts[b]
        first = np.floor((theta - half_angle) / width).astype(np.int64)
        last = np.floor((theta + half_angle) / width).astype(np.int64)
        lo = starts[np.mod(first, k)] + np.floor_divide(first, k) * m
        hi = starts[np.mod(last + 1, k)] + np.floor_divide(last + 1, k) * m
        return lo, np.minimum(hi, lo + m)


class BandedBuilder(GraphBuilder):
    """
    Bucketed construction; produces exactly the edge set of NaiveBuilder.

    Band pairs are independent; with workers > 1 they are evaluated on a
    thread pool (numpy releases the GIL in the heavy array passes). Results
    are merged in band-pair order, and the CSR form is canonical, so the
    graph does not depend on the worker count.
    """
    name = 'banded'

    def __init__(self, chunk_pairs=4_000_000, workers=1):
        super().__init__(chunk_pairs)
        self.workers = max(1, int(workers))

    def _collect_edges(self, ps):
        if ps.count < 2:
            return self._empty()
        grid = BandGrid.build(ps)
        pairs = [(i, j) for i in range(grid.band_count) for j in range(i, grid.band_count)
                 if grid.band_start[i + 1] > grid.band_start[i] and grid.band_start[j + 1] > grid.band_start[j]]
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                parts = list(pool.map(lambda p: self._band_pair(ps, grid, *p), pairs))
        else:
            parts = [self._band_pair(ps, grid, i, j) for i, j in pairs]
        if not parts:
            return self._empty()
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])

    def _band_pair(self, ps, grid, i, j):
        """Edges between band i (queries) and band j (scanned), i <= j."""
        R = ps.params.R
        queries = grid.members(i)
        targets = grid.members(j)
        m = len(targets)
        half_angle = _pruning_angle(grid.inner_radius(i), grid.inner_radius(j), R)
        lo, hi = grid.candidate_runs(j, ps.theta[queries], half_angle)
        lengths = hi - lo
        ends = np.cumsum(lengths)

        us, vs = [], []
        a = 0
        while a < len(queries):
            before = ends[a - 1] if a else 0
            b = int(np.searchsorted(ends, before + self.chunk_pairs, side='right'))
            b = max(b, a + 1)
            run = lengths[a:b]
            total = int(run.sum())
            if total:
                q = np.repeat(np.arange(a, b), run)
                offset = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(run) - run, run)
                u = queries[q]
                v = targets[np.mod(lo[q] + offset, m)]
                if i == j:
                    keep = u < v
                    u, v = u[keep], v[keep]
                hit = adjacent(ps.r[u], ps.theta[u], ps.r[v], ps.theta[v], R)
                us.append(u[hit])
                vs.append(v[hit])
            a = b
        if not us:
            return self._empty()
        return np.concatenate(us), np.concatenate(vs)


def build_banded(ps, workers=1):
    """Edge set identical to build_naive, scanning only candidate buckets."""
    return BandedBuilder(workers=workers).build(ps)
