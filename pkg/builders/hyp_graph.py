"""
HypGraph: the graph G = (V, E) of one sampled point set, adjacency stored in
compressed sparse row form with sorted, symmetric neighbor lists.
"""

from dataclasses import dataclass

import numpy as np

from utils.errors import ParameterError


@dataclass(frozen=True, eq=False)
class HypGraph:
    """
    Immutable graph over a PointSet; vertex v is point v of the set.

    Neighbors of v are indices[indptr[v]:indptr[v + 1]], ascending.

    Example usage:
        g = build_banded(ps)
        g.edge_count, g.neighbors(0), degree(g, 0)
        g.edges()                  # (E, 2) array, u < v, lexicographic
    """
    points: object
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        if indptr.shape != (self.points.count + 1,):
            raise ParameterError("indptr must have one entry per vertex plus one")
        indptr.setflags(write=False)
        indices.setflags(write=False)
        object.__setattr__(self, 'indptr', indptr)
        object.__setattr__(self, 'indices', indices)

    @classmethod
    def from_edges(cls, points, u, v):
        """
        Build the canonical CSR form from an unordered edge list.

        Self-loops and duplicate pairs are dropped, so builders may emit a
        pair more than once or in either orientation.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        keep = u != v
        u, v = u[keep], v[keep]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        count = points.count
        if rows.size:
            order = np.lexsort((cols, rows))
            rows, cols = rows[order], cols[order]
            fresh = np.ones(rows.size, dtype=bool)
            fresh[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            rows, cols = rows[fresh], cols[fresh]
        indptr = np.zeros(count + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=count), out=indptr[1:])
        return cls(points, indptr, cols)

    @property
    def vertex_count(self):
        return self.points.count

    @property
    def edge_count(self):
        return int(self.indices.shape[0] // 2)

    def neighbors(self, v):
        _check_vertex(self, v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degrees(self):
        return np.diff(self.indptr)

    def edges(self):
        """Edge list with u < v, sorted lexicographically."""
        rows = np.repeat(np.arange(self.vertex_count, dtype=np.int64), self.degrees())
        upper = rows < self.indices
        return np.column_stack([rows[upper], self.indices[upper]])

    def same_edges(self, other):
        return self.vertex_count == other.vertex_count and np.array_equal(self.edges(), other.edges())


def _check_vertex(g, v):
    if not (0 <= int(v) < g.vertex_count):
        raise ParameterError(f"vertex id {v} out of range for a graph with {g.vertex_count} vertices")


def degree(g, v):
    """Number of neighbors of vertex v."""
    _check_vertex(g, v)
    return int(g.indptr[v + 1] - g.indptr[v])
