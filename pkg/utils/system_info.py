import platform
import sys
from datetime import datetime, timezone

import h5py
import numpy as np
import scipy


def get_computer_name():
    """Host name of the machine, or "Unknown Computer" when it cannot be determined."""
    try:
        name = platform.node()
        return name if name else "Unknown Computer"
    except Exception:
        return "Unknown Computer"


def run_metadata():
    """Provenance attributes stored alongside HDF5 output.

    Returns:
        dict: host, creation time (UTC, ISO 8601) and library versions
    """
    return {
        'computer_name': get_computer_name(),
        'created': datetime.now(timezone.utc).isoformat(),
        'python': sys.version.split()[0],
        'numpy': np.__version__,
        'scipy': scipy.__version__,
        'h5py': h5py.__version__,
    }
