"""
Base class for graph builders.
"""
import logging
import time
from abc import ABC, abstractmethod

import numpy as np

from .hyp_graph import HypGraph

logger = logging.getLogger(__name__)


class GraphBuilder(ABC):
    """
    Base class for all edge-set constructions.

    Subclasses only collect candidate edges; canonicalization into a HypGraph
    (sorting, symmetrizing, dropping duplicates) happens here, so every
    backend yields the same CSR layout for the same edge set.
    """
    name = None

    def __init__(self, chunk_pairs=4_000_000):
        self.chunk_pairs = int(chunk_pairs)

    def build(self, ps):
        """Edge set {uv : d_h(u, v) <= R} of the point set ps as a HypGraph."""
        start = time.perf_counter()
        u, v = self._collect_edges(ps)
        g = HypGraph.from_edges(ps, u, v)
        logger.debug("%s.build(): %d vertices, %d edges in %.1f ms",
                     type(self).__name__, g.vertex_count, g.edge_count,
                     1000.0 * (time.perf_counter() - start))
        return g

    @abstractmethod
    def _collect_edges(self, ps):
        """Return endpoint arrays (u, v) of every edge, in any order or orientation."""
        pass

    @staticmethod
    def _empty():
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
