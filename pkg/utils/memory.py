"""
Memory budgeting helpers.

Scans size their worker pool against available RAM so that parallel trials at
n = 10^6 do not push the machine into swap.
"""
import logging
import os

import psutil

logger = logging.getLogger(__name__)

# Rough peak footprint of one trial per expected vertex: points, band grid,
# candidate pairs of one chunk, CSR arrays and union-find state.
BYTES_PER_VERTEX = 600
BASE_TRIAL_BYTES = 64 * 1024**2


def estimate_trial_bytes(n):
    """Estimated peak memory of one sample/build/analyse trial at expected size n."""
    return int(BASE_TRIAL_BYTES + BYTES_PER_VERTEX * float(n))


def available_bytes(fraction=0.9):
    """Bytes we allow ourselves to use: a fraction of the currently available RAM."""
    return int(psutil.virtual_memory().available * fraction)


def max_workers_for(n, requested=None):
    """Number of worker processes for trials of expected size n.

    Bounded by the CPU count, by the memory budget, and by `requested` when given.
    """
    cpus = os.cpu_count() or 1
    by_memory = max(1, available_bytes() // estimate_trial_bytes(n))
    limit = min(cpus, by_memory)
    if requested is not None:
        limit = min(limit, max(1, int(requested)))
    logger.debug(
        "max_workers_for(): n=%g cpus=%d memory allows %d (%s per trial) -> %d",
        n, cpus, by_memory, format_size(estimate_trial_bytes(n)), limit,
    )
    return int(limit)


def format_size(bytes_size):
    """Format bytes to human readable size."""
    for unit in ['B', 'KB', 'MB', 'GB']:
        if bytes_size < 1024:
            return f"{bytes_size:.1f} {unit}"
        bytes_size /= 1024
    return f"{bytes_size:.1f} TB"
