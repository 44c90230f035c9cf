"""
Base classes for audits.

An audit checks one structural statement about the model on a sampled
instance (or on Monte Carlo draws) and reports how often it fails.
"""
import json
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from analysis.components import connected_components
from builders.builder_manager import get_builder
from model.sampler import sample
from utils.rng import stream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuditReport:
    """One line of the audit JSONL report."""
    audit: str
    params: dict
    violations: int
    samples: int
    seed: int
    details: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps({
            'audit': self.audit, 'params': self.params, 'violations': int(self.violations),
            'samples': int(self.samples), 'seed': int(self.seed), 'details': self.details,
        }, sort_keys=True)


class AuditContext:
    """
    The instance under audit, built lazily and shared between audits.

    Example usage:
        ctx = AuditContext(ModelParams(alpha=0.7, nu=1.0, n=1e5, seed=3))
        ctx.graph.edge_count, ctx.components.L2
        rng = ctx.rng('wall_separation')
    """

    def __init__(self, params, builder='banded'):
        self.params = params
        self.builder = builder
        self._points = None
        self._graph = None
        self._components = None

    @property
    def points(self):
        if self._points is None:
            self._points = sample(self.params)
        return self._points

    @property
    def graph(self):
        if self._graph is None:
            self._graph = get_builder(self.builder).build(self.points)
        return self._graph

    @property
    def components(self):
        if self._components is None:
            self._components = connected_components(self.graph)
        return self._components

    def rng(self, name):
        """Monte Carlo stream of audit `name`, independent of the point process stream."""
        return stream(self.params.seed, 'audit', name)


class Audit(ABC):
    """Base class for all audits; options come from audit_defaults.json and the CLI."""
    name = None

    def __init__(self, **options):
        self.options = dict(options)
        self.threshold = int(self.options.pop('threshold', 0))

    def run(self, ctx):
        """Run against ctx and wrap the outcome into an AuditReport."""
        start = time.perf_counter()
        violations, samples, details = self.check(ctx)
        logger.info("%s.run(): %d violations over %d samples (%.0f ms)", type(self).__name__,
                    violations, samples, 1000.0 * (time.perf_counter() - start))
        params = {**ctx.params.as_dict(), **self.options}
        return AuditReport(self.name, params, int(violations), int(samples), ctx.params.seed, details)

    @abstractmethod
    def check(self, ctx):
        """Return (violations, samples, details)."""
        pass
