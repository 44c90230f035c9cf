import json
import math

import numpy as np
import pandas as pd
import pytest

from experiments.fitting import (
    fit_l2_exponent, is_strictly_increasing, medians_by_n, ratio_spread,
)
from experiments.presets import boundary_preset, load_presets, preset_config
from experiments.record_queue import ReorderQueue
from experiments.record_writer import format_for, get_writer, read_records, write_records
from experiments.scan import COLUMNS, ScanConfig, TrialRecord, run_scan, run_trial
from utils.errors import FitError, ParameterError, RecordIOError
from utils.rng import trial_seed


def small_config(**overrides):
    values = dict(n_grid=[300, 600], alpha_grid=[0.75, 0.9], nu_grid=[1.0], trials=3,
                  master_seed=17, workers=1)
    values.update(overrides)
    return ScanConfig(**values)


class TestScanConfig:
    def test_grids(self):
        config = small_config()
        assert config.n_grid == (300.0, 600.0)
        assert config.cells()[0] == (300.0, 0.75, 1.0)
        assert len(config.tasks()) == 2 * 2 * 1 * 3
        assert config.columns == COLUMNS

    def test_ge_columns(self):
        assert small_config(ge_thresholds=[2, 5]).columns == COLUMNS + ['ge_2', 'ge_5']

    @pytest.mark.parametrize("overrides", [
        dict(n_grid=[]),
        dict(trials=0),
        dict(builder='quadtree'),
        dict(format='parquet'),
        dict(alpha_grid=[-0.5]),
        dict(n_grid=[2e6]),
        dict(ge_thresholds=[0]),
    ])
    def test_rejects(self, overrides):
        with pytest.raises(ParameterError):
            small_config(**overrides)

    def test_n_cap_override(self):
        assert small_config(n_grid=[2e6], n_cap=3e6).n_grid == (2e6,)

    def test_from_json(self, tmp_path):
        path = tmp_path / 'scan.json'
        path.write_text(json.dumps({'n_grid': [1e3], 'alpha_grid': [0.7], 'nu_grid': [1], 'trials': 4}))
        config = ScanConfig.from_json(path, trials=2, builder=None)
        assert config.trials == 2 and config.builder == 'banded'

    def test_from_json_errors(self, tmp_path):
        with pytest.raises(RecordIOError):
            ScanConfig.from_json(tmp_path / 'missing.json')
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps({'n_grid': [1e3], 'alpha_grid': [0.7], 'nu_grid': [1], 'colour': 'red'}))
        with pytest.raises(ParameterError):
            ScanConfig.from_json(path)


class TestRunScan:
    def test_one_record(self):
        records = list(run_scan(small_config(n_grid=[300], alpha_grid=[0.75], trials=1), progress=False))
        assert len(records) == 1
        record = records[0]
        assert record.L2 <= record.L1 <= record.vertices
        assert record.num_components >= 1
        assert record.ms == 0.0

    def test_canonical_order_and_totality(self):
        config = small_config()
        records = list(run_scan(config, progress=False))
        keys = [(r.n, r.alpha, r.nu, r.trial) for r in records]
        assert keys == [(n, a, nu, t) for n, a, nu in config.cells() for t in range(config.trials)]

    def test_paired_seeds(self):
        records = list(run_scan(small_config(), progress=False))
        for r in records:
            assert r.seed == trial_seed(17, r.trial)

    def test_parallel_matches_serial(self):
        serial = [r.as_row() for r in run_scan(small_config(), progress=False)]
        parallel = [r.as_row() for r in run_scan(small_config(workers=2), progress=False)]
        assert serial == parallel

    def test_builders_agree(self):
        naive = list(run_scan(small_config(builder='naive'), progress=False))
        banded = list(run_scan(small_config(builder='banded'), progress=False))
        for a, b in zip(naive, banded):
            assert (a.L1, a.L2, a.num_components, a.edges) == (b.L1, b.L2, b.num_components, b.edges)

    def test_ge_counts(self):
        record = run_trial(600, 0.9, 1.0, 0, 3, ge_thresholds=(1, 2))
        assert record.ge[1] == record.num_components
        assert record.ge[2] <= record.ge[1]
        assert list(record.as_row())[-2:] == ['ge_1', 'ge_2']

    def test_timing(self):
        assert run_trial(300, 0.75, 1.0, 0, 3, timing=True).ms > 0


class TestRecordFiles:
    @pytest.mark.parametrize("fmt", ['csv', 'jsonl'])
    def test_byte_identical(self, tmp_path, fmt):
        config = small_config(ge_thresholds=[2])
        first, second = tmp_path / f'a.{fmt}', tmp_path / f'b.{fmt}'
        write_records(run_scan(config, progress=False), first, config.columns, fmt=fmt)
        write_records(run_scan(config, progress=False), second, config.columns, fmt=fmt)
        assert first.read_bytes() == second.read_bytes()

    def test_csv_header(self, tmp_path):
        config = small_config(trials=1)
        path = tmp_path / 'scan.csv'
        count = write_records(run_scan(config, progress=False), path, config.columns)
        assert path.read_text().splitlines()[0] == 'n,alpha,nu,seed,vertices,edges,L1,L2,num_components,builder,ms'
        assert count == len(config.tasks())

    @pytest.mark.parametrize("suffix", ['csv', 'jsonl', 'h5'])
    def test_read_back(self, tmp_path, suffix):
        config = small_config(ge_thresholds=[3])
        records = list(run_scan(config, progress=False))
        path = tmp_path / f'scan.{suffix}'
        write_records(records, path, config.columns)
        frame = read_records(path)
        assert list(frame.columns) == config.columns
        assert frame['L2'].tolist() == [r.L2 for r in records]
        assert frame['builder'].tolist() == ['banded'] * len(records)
        if suffix != 'jsonl':
            assert [int(s) for s in frame['seed']] == [r.seed for r in records]

    def test_formats(self):
        assert format_for('x.jsonl') == 'jsonl'
        assert format_for('x.hdf5') == 'h5'
        assert format_for('x.txt') == 'csv'
        with pytest.raises(ParameterError):
            get_writer('xml', 'x.xml', COLUMNS)

    def test_unwritable(self, tmp_path):
        with pytest.raises(RecordIOError):
            write_records([], tmp_path / 'missing' / 'scan.jsonl', COLUMNS)

    def test_unreadable(self, tmp_path):
        with pytest.raises(RecordIOError):
            read_records(tmp_path / 'missing.csv')


class TestReorderQueue:
    def test_release_in_order(self):
        queue = ReorderQueue(3)
        queue.put(2, 'c')
        assert list(queue.drain()) == []
        queue.put(0, 'a')
        assert list(queue.drain()) == ['a']
        queue.put(1, 'b')
        assert list(queue.drain()) == ['b', 'c']
        assert queue.is_complete() and queue.is_empty()
        assert queue.get_queue_stats()['max_pending'] == 2

    def test_duplicate(self):
        queue = ReorderQueue(2)
        queue.put(0, 'a')
        list(queue.drain())
        with pytest.raises(ValueError):
            queue.put(0, 'a')

    def test_pending_size(self):
        queue = ReorderQueue(4)
        queue.put(3, 'd')
        assert queue.get_pending_size().endswith('B')


def synthetic(ns, law, trials=3):
    return [{'n': n, 'alpha': 0.75, 'nu': 1.0, 'L2': law(n)} for n in ns for _ in range(trials)]


class TestFitting:
    ns = [1e4, 3e4, 1e5, 3e5, 1e6]

    def test_loglog(self):
        result = fit_l2_exponent(synthetic(self.ns, lambda n: math.log(n) ** 3), mode='loglog')
        assert result.slope == pytest.approx(3.0, abs=1e-9)
        assert result.residual == pytest.approx(0.0, abs=1e-9)

    def test_polynomial(self):
        result = fit_l2_exponent(synthetic(self.ns, lambda n: n ** 0.4), mode='polynomial')
        assert result.slope == pytest.approx(0.4, abs=1e-9)
        assert result.intercept == pytest.approx(0.0, abs=1e-8)
        assert result.lower_confidence() == pytest.approx(0.4, abs=1e-6)

    def test_accepts_frames_and_records(self):
        frame = pd.DataFrame(synthetic(self.ns, lambda n: n ** 0.4))
        assert fit_l2_exponent(frame, 'polynomial').slope == pytest.approx(0.4, abs=1e-9)
        records = [TrialRecord(n=n, alpha=0.7, nu=1.0, seed=0, vertices=10, edges=5, L1=8, L2=int(n ** 0.5),
                               num_components=2, builder='banded') for n in (100, 10_000, 1_000_000)]
        assert fit_l2_exponent(records, 'polynomial').slope == pytest.approx(0.5, abs=1e-9)

    def test_medians(self):
        records = [{'n': 10, 'L2': v} for v in (1, 5, 3)] + [{'n': 20, 'L2': v} for v in (2, 8)]
        assert medians_by_n(records).to_dict() == {10: 3.0, 20: 5.0}

    def test_needs_three_n(self):
        with pytest.raises(FitError):
            fit_l2_exponent(synthetic([1e4, 1e5], lambda n: n))

    def test_zero_medians_dropped(self):
        records = synthetic([1e4, 1e5, 1e6], lambda n: n) + synthetic([1e3], lambda n: 0)
        assert fit_l2_exponent(records, 'polynomial').slope == pytest.approx(1.0)
        with pytest.raises(FitError):
            fit_l2_exponent(synthetic([1e4, 1e5], lambda n: n) + synthetic([1e3], lambda n: 0))

    def test_mixed_cells(self):
        records = synthetic(self.ns, lambda n: n)
        records[0]['alpha'] = 0.9
        with pytest.raises(FitError):
            fit_l2_exponent(records)

    def test_unknown_mode(self):
        with pytest.raises(ParameterError):
            fit_l2_exponent(synthetic(self.ns, lambda n: n), mode='cubic')

    def test_trend_helpers(self):
        medians = pd.Series({100.0: 4.0, 1000.0: 6.0, 10000.0: 8.0})
        assert ratio_spread(medians, math.log) == pytest.approx(
            max(m / math.log(n) for n, m in medians.items()) / min(m / math.log(n) for n, m in medians.items()))
        assert ratio_spread(pd.Series({10.0: 0.0, 20.0: 1.0}), math.log) == math.inf
        assert is_strictly_increasing(medians)
        assert not is_strictly_increasing([1, 1, 2])


class TestPresets:
    def test_load(self):
        presets = load_presets()
        assert presets['half']['alpha'] == 0.5 and presets['one']['alpha'] == 1.0
        assert presets['half']['nu'] == presets['one']['nu'] == 0.2

    def test_config(self):
        config = preset_config('half', nu=4.0, trials=2)
        assert config.alpha_grid == (0.5,) and config.nu_grid == (4.0,)
        assert config.n_grid == (1e4, 3e4, 1e5, 3e5, 1e6)
        assert config.trials == 2

    def test_unknown(self):
        with pytest.raises(ParameterError):
            preset_config('two')


def scan_medians(config):
    return medians_by_n(list(run_scan(config, progress=False)))


@pytest.mark.slow
def test_l2_grows_with_n():
    config = ScanConfig(n_grid=[1e4, 3e4, 1e5, 3e5, 1e6], alpha_grid=[0.75], nu_grid=[1.0], trials=30)
    records = list(run_scan(config, progress=False))
    medians = medians_by_n(records)
    assert is_strictly_increasing(medians)
    assert ratio_spread(medians, lambda n: math.log(n) ** 4) <= 4
    assert 2 <= fit_l2_exponent(records, 'loglog').slope <= 6


@pytest.mark.slow
def test_l2_grows_with_alpha():
    config = ScanConfig(n_grid=[1e5], alpha_grid=[0.6, 0.85], nu_grid=[1.0], trials=30)
    frame = pd.DataFrame([r.as_row() for r in run_scan(config, progress=False)])
    by_alpha = frame.groupby('alpha')['L2'].median()
    assert by_alpha[0.85] > by_alpha[0.6]


@pytest.mark.slow
def test_half_preset():
    medians = medians_by_n(list(boundary_preset('half', progress=False)))
    assert ratio_spread(medians, math.log) <= 3
    connected = [r.L2 == 0 for r in boundary_preset('half', nu=4.0, progress=False)]
    assert np.mean(connected) > 0.5


@pytest.mark.slow
def test_one_preset():
    result = fit_l2_exponent(list(boundary_preset('one', progress=False)), mode='polynomial')
    assert result.slope >= 0.1
    assert result.lower_confidence() > 0


@pytest.mark.slow
def test_multiplicity_trend():
    # threshold k = half the median L2 at the small end, counted on paired seeds at both ends
    small = ScanConfig(n_grid=[1e4], alpha_grid=[0.75], nu_grid=[1.0], trials=30, master_seed=5)
    k = max(1, int(0.5 * medians_by_n(list(run_scan(small, progress=False)))[1e4]))
    both = ScanConfig(n_grid=[1e4, 1e6], alpha_grid=[0.75], nu_grid=[1.0], trials=30, master_seed=5,
                      ge_thresholds=[k])
    records = list(run_scan(both, progress=False))
    low, high = records[:30], records[30:]
    assert all(a.seed == b.seed for a, b in zip(low, high))
    wins = sum(b.ge[k] > a.ge[k] for a, b in zip(low, high))
    assert wins >= 27
