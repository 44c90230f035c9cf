"""
Brute-force builder: every one of the C(count, 2) pairs is tested.

Serves as the oracle the banded builder is checked against.
"""
import numpy as np

from model.geometry import adjacent
from .base_builder import GraphBuilder


class NaiveBuilder(GraphBuilder):
    """All-pairs adjacency, evaluated in row blocks of at most chunk_pairs pairs."""
    name = 'naive'

    def _collect_edges(self, ps):
        count = ps.count
        if count < 2:
            return self._empty()
        R = ps.params.R
        rows_per_block = max(1, self.chunk_pairs // count)
        cols = np.arange(count, dtype=np.int64)
        us, vs = [], []
        for first in range(0, count, rows_per_block):
            rows = np.arange(first, min(first + rows_per_block, count), dtype=np.int64)
            mask = adjacent(ps.r[rows, None], ps.theta[rows, None], ps.r[None, :], ps.theta[None, :], R)
            mask &= cols[None, :] > rows[:, None]
            i, j = np.nonzero(mask)
            us.append(rows[i])
            vs.append(j.astype(np.int64))
        return np.concatenate(us), np.concatenate(vs)


def build_naive(ps):
    """Exact edge set by testing all pairs."""
    return NaiveBuilder().build(ps)
