"""
Registry of graph builders.
"""
import logging
from typing import Dict, Type

from utils.errors import ParameterError
from .base_builder import GraphBuilder
from .banded import BandedBuilder
from .naive import NaiveBuilder

logger = logging.getLogger(__name__)

# Register new builder types here
BUILDER_TYPES: Dict[str, Type[GraphBuilder]] = {
    'naive': NaiveBuilder,
    'banded': BandedBuilder,
}


def get_builder(name, **options):
    """Instantiate the builder registered under `name`.

    Example usage:
        g = get_builder('banded', workers=4).build(ps)
    """
    builder_class = BUILDER_TYPES.get(name)
    if builder_class is None:
        raise ParameterError(f"unknown builder '{name}', choose from {sorted(BUILDER_TYPES)}")
    logger.debug("get_builder(): %s with %s", name, options)
    return builder_class(**options)
