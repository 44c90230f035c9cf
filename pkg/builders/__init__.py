"""
rhgTool builders package.
Edge-set construction backends and the graph container they produce.
"""

from .hyp_graph import HypGraph, degree
from .base_builder import GraphBuilder
from .naive import NaiveBuilder, build_naive
from .banded import BandGrid, BandedBuilder, build_banded
from .builder_manager import BUILDER_TYPES, get_builder
from .graph_io import write_graph_text, read_graph_text, write_graph_h5, read_graph_h5, read_graph

__all__ = ['HypGraph', 'degree', 'GraphBuilder', 'NaiveBuilder', 'build_naive',
           'BandGrid', 'BandedBuilder', 'build_banded', 'BUILDER_TYPES', 'get_builder',
           'write_graph_text', 'read_graph_text', 'write_graph_h5', 'read_graph_h5', 'read_graph']
