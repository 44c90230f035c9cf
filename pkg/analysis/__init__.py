"""
rhgTool analysis package.
"""

from .components import (
    UnionFind, ComponentSummary, connected_components, bfs_components,
    second_largest, size_histogram, count_components_ge,
)
