"""
Status reporting for the rhgTool project.
Provides a centralized way to report progress of long-running work (scans,
large builds, audits) from anywhere in the project.
"""

import logging
from typing import Optional

logger = logging.getLogger("rhgtool.status")

# Global reference to the active progress bar
_progress_bar = None


def set_progress_bar(bar):
    """
    Register the tqdm progress bar that status messages should go to.
    Pass None to fall back to plain log records.

    Args:
        bar: a tqdm instance, or None
    """
    global _progress_bar
    _progress_bar = bar


def update_status(message: str, level: Optional[int] = None):
    """
    Report a status message.

    With a progress bar registered the message becomes its postfix, so it does
    not break the bar's line; the message is logged at DEBUG in that case.
    Without a bar it is logged at INFO (or `level`).

    Example usage:
        from utils.status import update_status

        update_status("Building graph for n=100000")
        update_status(f"Trial {done}/{total} finished")
    """
    if _progress_bar is not None:
        _progress_bar.set_postfix_str(message, refresh=False)
        logger.debug(message)
        return
    logger.log(logging.INFO if level is None else level, message)
