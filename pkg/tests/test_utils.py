import logging

import numpy as np
import pytest

from utils import format_size, max_workers_for, run_metadata, set_progress_bar, stream, trial_seed, update_status
from utils.errors import FitError, ParameterError, RecordIOError, RHGError
from utils.memory import estimate_trial_bytes


class TestStreams:
    def test_same_key_same_draws(self):
        np.testing.assert_array_equal(stream(4, 'audit', 2).random(5), stream(4, 'audit', 2).random(5))

    def test_keys_split_streams(self):
        base = stream(4).random(5)
        assert not np.array_equal(base, stream(4, 'audit').random(5))
        assert not np.array_equal(stream(4, 'audit', 1).random(5), stream(4, 'audit', 2).random(5))

    def test_trial_seeds(self):
        seeds = [trial_seed(7, t) for t in range(50)]
        assert len(set(seeds)) == 50
        assert all(0 <= s < 2**64 for s in seeds)
        assert trial_seed(7, 3) == trial_seed(7, 3)
        assert trial_seed(7, 3) != trial_seed(8, 3)


class TestMemory:
    def test_format_size(self):
        assert format_size(512) == '512.0 B'
        assert format_size(1536) == '1.5 KB'
        assert format_size(3 * 1024**4) == '3.0 TB'

    def test_workers(self):
        assert max_workers_for(1e4) >= 1
        assert max_workers_for(1e4, requested=1) == 1
        assert max_workers_for(1e4, requested=0) == 1

    def test_estimate_grows(self):
        assert estimate_trial_bytes(1e6) > estimate_trial_bytes(1e4)


class FakeBar:
    def __init__(self):
        self.postfix = None

    def set_postfix_str(self, message, refresh=True):
        self.postfix = message


class TestStatus:
    def test_logged_without_bar(self, caplog):
        with caplog.at_level(logging.INFO, logger='rhgtool.status'):
            update_status('building')
        assert 'building' in caplog.text

    def test_goes_to_bar(self):
        bar = FakeBar()
        set_progress_bar(bar)
        try:
            update_status('trial 3/10')
        finally:
            set_progress_bar(None)
        assert bar.postfix == 'trial 3/10'


def test_run_metadata():
    meta = run_metadata()
    assert {'computer_name', 'created', 'numpy', 'scipy', 'h5py'} <= set(meta)
    assert meta['numpy'] == np.__version__


class TestErrors:
    def test_hierarchy(self):
        assert issubclass(ParameterError, ValueError)
        assert issubclass(RecordIOError, OSError)
        assert issubclass(FitError, RHGError)

    def test_record_io_path(self):
        error = RecordIOError('/tmp/x.csv', 'gone')
        assert error.path == '/tmp/x.csv'
        assert str(error) == '/tmp/x.csv: gone'
        with pytest.raises(OSError):
            raise error
