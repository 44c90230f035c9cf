"""
Manager for all audits.
"""
import json
import logging
from pathlib import Path
from typing import Dict, Type

from utils.errors import ParameterError, RecordIOError
from .base_audit import Audit, AuditContext
from .giant_membership import GiantMembershipAudit
from .precomponents import PrecomponentsAudit
from .projection_lemma import ProjectionLemmaAudit
from .sector_occupancy import SectorOccupancyAudit
from .wall_separation import WallSeparationAudit

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent / 'audit_defaults.json'


class AuditManager:
    """
    Runs registered audits against one instance.

    Example usage:
        manager = AuditManager()
        reports = manager.run(['wall_separation', 'giant_membership'], params, overrides={'M': 6})
        manager.write_reports(reports, 'audit.jsonl')
    """

    # Register new audit types here
    AUDIT_TYPES: Dict[str, Type[Audit]] = {
        'wall_separation': WallSeparationAudit,
        'projection_lemma': ProjectionLemmaAudit,
        'giant_membership': GiantMembershipAudit,
        'sector_occupancy': SectorOccupancyAudit,
        'precomponents': PrecomponentsAudit,
    }

    def __init__(self, defaults_path=DEFAULTS_PATH):
        self.defaults = self._load_defaults(defaults_path)
        self.thresholds = {}

    def _load_defaults(self, path):
        """Load per-audit default options from the JSON file."""
        try:
            with open(path, 'r') as file:
                return json.load(file)
        except (OSError, json.JSONDecodeError) as e:
            raise RecordIOError(path, f"cannot load audit defaults: {e}") from e

    def get_audit(self, name, overrides=None):
        """Instantiate audit `name` with its defaults, updated by the overrides it knows about."""
        audit_class = self.AUDIT_TYPES.get(name)
        if audit_class is None:
            raise ParameterError(f"unknown audit '{name}', choose from {sorted(self.AUDIT_TYPES)}")
        options = dict(self.defaults.get(name, {}))
        for key, value in (overrides or {}).items():
            if key in options and value is not None:
                options[key] = value
        return audit_class(**options)

    def run(self, names, params, overrides=None, builder='banded'):
        """Run the named audits against one shared AuditContext; returns reports in order."""
        ctx = AuditContext(params, builder=builder)
        reports = []
        for name in names:
            audit = self.get_audit(name, overrides)
            logger.info("AuditManager.run(): running %s on alpha=%g nu=%g n=%g seed=%d",
                        name, params.alpha, params.nu, params.n, params.seed)
            self.thresholds[name] = audit.threshold
            reports.append(audit.run(ctx))
        return reports

    def exceeded(self, reports, threshold=None):
        """Reports whose violations exceed their threshold (or `threshold` when given)."""
        return [report for report in reports
                if report.violations > (self.thresholds.get(report.audit, 0) if threshold is None else threshold)]

    @staticmethod
    def write_reports(reports, path):
        """Write one JSON line per report."""
        try:
            with open(path, 'w') as file:
                for report in reports:
                    file.write(report.to_json() + '\n')
        except OSError as e:
            raise RecordIOError(path, f"cannot write audit report: {e}") from e


AUDIT_TYPES = AuditManager.AUDIT_TYPES
