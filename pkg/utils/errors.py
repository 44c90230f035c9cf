"""
Exception hierarchy for rhgTool.

Library code raises these; app.py maps them to exit codes.
"""


class RHGError(Exception):
    """Base class for all rhgTool errors."""


class ParameterError(RHGError, ValueError):
    """Invalid model, region, builder or scan parameters."""


class GeometryError(RHGError, ValueError):
    """A geometry kernel precondition was violated."""


class FitError(RHGError):
    """A scaling-law fit is undefined for the given records."""


class RecordIOError(RHGError, OSError):
    """Reading or writing a file failed. Carries the offending path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = str(path)


class AuditThresholdExceeded(RHGError):
    """An audit reported more violations than allowed."""

    def __init__(self, audit, violations, threshold):
        super().__init__(f"audit '{audit}' reported {violations} violations (threshold {threshold})")
        self.audit = audit
        self.violations = violations
        self.threshold = threshold
