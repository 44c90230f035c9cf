"""
Connected-component analysis of a HypGraph.

1. UnionFind: disjoint sets with path halving and union by size
2. ComponentSummary: sizes (descending), per-vertex labels, L1, L2
3. connected_components / bfs_components: union-find result and the
   breadth-first reference it is tested against

A component's label is its smallest vertex id, so labels are canonical and
do not depend on edge order.

Called by:
- audits/: giant membership and pre-component checks
- experiments/scan.py: L1, L2 and multiplicity columns of every trial
- app.py: `components` subcommand
"""
import logging
from collections import Counter, deque
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from utils.errors import ParameterError

logger = logging.getLogger(__name__)


class UnionFind:
    """
    Disjoint-set forest over 0..count-1.

    Example usage:
        uf = UnionFind(5)
        uf.union(0, 3)
        uf.find(3) == uf.find(0)    # True
        uf.labels()                  # smallest member of each vertex's set
    """

    def __init__(self, count):
        self.parent = list(range(count))
        self.size = [1] * count

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        """Merge the sets of a and b; returns False if they were already one set."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def labels(self):
        """Per-vertex label: the smallest vertex of its set."""
        roots = np.fromiter((self.find(x) for x in range(len(self.parent))), dtype=np.int64,
                            count=len(self.parent))
        return canonical_labels(roots)


def canonical_labels(raw):
    """Relabel any partition labelling so each class is named by its smallest member."""
    raw = np.asarray(raw, dtype=np.int64)
    if raw.size == 0:
        return raw
    smallest = np.full(int(raw.max()) + 1, raw.size, dtype=np.int64)
    np.minimum.at(smallest, raw, np.arange(raw.size, dtype=np.int64))
    return smallest[raw]


@dataclass(frozen=True, eq=False)
class ComponentSummary:
    """
    Component structure of one graph.

    sizes is descending; labels[v] is the smallest vertex id of v's component.
    """
    sizes: np.ndarray
    labels: np.ndarray

    @property
    def num_components(self):
        return int(self.sizes.shape[0])

    @property
    def L1(self):
        return int(self.sizes[0]) if self.num_components else 0

    @property
    def L2(self):
        return int(self.sizes[1]) if self.num_components > 1 else 0

    @property
    def giant_label(self):
        """Label of the largest component, smallest label on ties; -1 for an empty graph."""
        if not self.num_components:
            return -1
        ids, counts = np.unique(self.labels, return_counts=True)
        return int(ids[np.flatnonzero(counts == counts.max())[0]])

    def in_giant(self):
        """Boolean mask of the vertices in the largest component."""
        return self.labels == self.giant_label


def summarize(labels):
    """ComponentSummary from any partition labelling."""
    labels = canonical_labels(labels)
    if labels.size == 0:
        return ComponentSummary(np.empty(0, dtype=np.int64), labels)
    sizes = np.bincount(labels)
    sizes = np.sort(sizes[sizes > 0])[::-1].astype(np.int64)
    return ComponentSummary(sizes, labels)


def connected_components(g, method='csgraph'):
    """
    Exact components of g.

    method 'union_find' merges along the edge list with UnionFind; 'csgraph'
    hands the CSR arrays to scipy's compiled traversal and is the one scans
    use at n = 10^6. Both give identical summaries.
    """
    if method == 'union_find':
        uf = UnionFind(g.vertex_count)
        for u, v in g.edges().tolist():
            uf.union(u, v)
        raw = uf.labels()
    elif method == 'csgraph':
        count = g.vertex_count
        if count == 0:
            raw = np.empty(0, dtype=np.int64)
        else:
            data = np.ones(g.indices.shape[0], dtype=np.int8)
            matrix = sparse.csr_matrix((data, g.indices, g.indptr), shape=(count, count))
            _, raw = csgraph.connected_components(matrix, directed=False)
    else:
        raise ParameterError(f"unknown component method '{method}'")
    cs = summarize(raw)
    logger.debug("connected_components(): %d vertices, %d components, L1=%d L2=%d",
                 g.vertex_count, cs.num_components, cs.L1, cs.L2)
    return cs


def bfs_components(g):
    """Breadth-first flood fill; reference implementation for connected_components."""
    labels = np.full(g.vertex_count, -1, dtype=np.int64)
    for start in range(g.vertex_count):
        if labels[start] >= 0:
            continue
        labels[start] = start
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if labels[y] < 0:
                    labels[y] = start
                    queue.append(y)
    return summarize(labels)


def second_largest(cs):
    """L2: size of the second-largest component, 0 with fewer than two components."""
    return cs.L2


def size_histogram(cs):
    """Map component size -> number of components of that size."""
    return dict(Counter(int(s) for s in cs.sizes))


def count_components_ge(cs, k):
    """Number of components with at least k vertices."""
    return int(np.count_nonzero(cs.sizes >= k))
