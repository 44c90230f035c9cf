"""
Experiment sweeps over (n, alpha, nu) grids.

Every (cell, trial) task samples one instance with the seed
trial_seed(master_seed, trial), builds its graph, and summarizes its
components into a TrialRecord. Seeds depend only on the trial index, so
trial t of every cell uses the same stream and cells are compared on paired
seeds. Records are released in canonical (n, alpha, nu, trial) order
whatever the worker count, which makes scan output reproducible byte for byte.

Called by:
- app.py: `scan` subcommand
- experiments/presets.py: boundary presets run through run_scan
"""
import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field

from tqdm import tqdm

from analysis.components import connected_components, count_components_ge
from builders.builder_manager import BUILDER_TYPES, get_builder
from model.geometry import ModelParams
from model.sampler import sample
from utils.errors import ParameterError, RecordIOError, RHGError
from utils.memory import max_workers_for
from utils.rng import trial_seed
from utils.status import set_progress_bar, update_status
from .record_queue import ReorderQueue

logger = logging.getLogger(__name__)

# Fixed leading CSV columns; ge_<k> columns follow.
COLUMNS = ['n', 'alpha', 'nu', 'seed', 'vertices', 'edges', 'L1', 'L2', 'num_components', 'builder', 'ms']

DEFAULT_N_CAP = 1e6


def _grid(values):
    if isinstance(values, (int, float)):
        values = [values]
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class ScanConfig:
    """
    One sweep: grids, trials per cell, master seed, builder and output.

    Example usage:
        config = ScanConfig(n_grid=[1e4, 1e5], alpha_grid=[0.75], nu_grid=[1.0], trials=30)
        for record in run_scan(config):
            ...
    """
    n_grid: tuple
    alpha_grid: tuple
    nu_grid: tuple
    trials: int = 1
    master_seed: int = 0
    builder: str = 'banded'
    out: str = None
    format: str = 'csv'
    ge_thresholds: tuple = ()
    timing: bool = False
    workers: int = None
    n_cap: float = DEFAULT_N_CAP

    def __post_init__(self):
        object.__setattr__(self, 'n_grid', _grid(self.n_grid))
        object.__setattr__(self, 'alpha_grid', _grid(self.alpha_grid))
        object.__setattr__(self, 'nu_grid', _grid(self.nu_grid))
        object.__setattr__(self, 'ge_thresholds', tuple(int(k) for k in self.ge_thresholds))
        if not (self.n_grid and self.alpha_grid and self.nu_grid):
            raise ParameterError("n, alpha and nu grids must be non-empty")
        if int(self.trials) < 1:
            raise ParameterError(f"trials must be at least 1, got {self.trials}")
        if self.builder not in BUILDER_TYPES:
            raise ParameterError(f"unknown builder '{self.builder}', choose from {sorted(BUILDER_TYPES)}")
        if self.format not in ('csv', 'jsonl', 'h5'):
            raise ParameterError(f"unknown output format '{self.format}'")
        if any(k < 1 for k in self.ge_thresholds):
            raise ParameterError("multiplicity thresholds must be positive")
        too_big = [n for n in self.n_grid if n > self.n_cap]
        if too_big:
            raise ParameterError(f"n={too_big[0]:g} exceeds the cap {self.n_cap:g}; raise it with --n-cap")
        # every cell must describe a valid model before anything runs
        for n, alpha, nu in self.cells():
            ModelParams(alpha=alpha, nu=nu, n=n)

    @classmethod
    def from_json(cls, path, **overrides):
        """Load a config from a JSON object with ScanConfig field names."""
        try:
            with open(path, 'r') as file:
                values = json.load(file)
        except (OSError, json.JSONDecodeError) as e:
            raise RecordIOError(path, f"cannot load scan config: {e}") from e
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except TypeError as e:
            raise ParameterError(f"{path}: {e}") from e

    def cells(self):
        """Grid cells in canonical (n, alpha, nu) order."""
        return list(itertools.product(self.n_grid, self.alpha_grid, self.nu_grid))

    def tasks(self):
        """(index, n, alpha, nu, trial) for every trial, in canonical order."""
        return [(i, n, alpha, nu, trial) for i, ((n, alpha, nu), trial)
                in enumerate(itertools.product(self.cells(), range(int(self.trials))))]

    @property
    def columns(self):
        return COLUMNS + [f'ge_{k}' for k in self.ge_thresholds]


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial; `ge` maps k to the number of components of size >= k."""
    n: float
    alpha: float
    nu: float
    seed: int
    vertices: int
    edges: int
    L1: int
    L2: int
    num_components: int
    builder: str
    ms: float = 0.0
    trial: int = 0
    ge: dict = field(default_factory=dict)

    def as_row(self):
        """Column name -> value, in output column order."""
        row = {name: getattr(self, name) for name in COLUMNS}
        row.update({f'ge_{k}': v for k, v in sorted(self.ge.items())})
        return row


def run_trial(n, alpha, nu, trial, master_seed, builder='banded', ge_thresholds=(), timing=False):
    """Sample, build and summarize one trial."""
    start = time.perf_counter()
    params = ModelParams(alpha=alpha, nu=nu, n=n, seed=trial_seed(master_seed, trial))
    ps = sample(params)
    g = get_builder(builder).build(ps)
    cs = connected_components(g)
    elapsed = round(1000.0 * (time.perf_counter() - start), 3) if timing else 0.0
    return TrialRecord(
        n=n, alpha=alpha, nu=nu, seed=params.seed, vertices=g.vertex_count, edges=g.edge_count,
        L1=cs.L1, L2=cs.L2, num_components=cs.num_components, builder=builder, ms=elapsed,
        trial=trial, ge={k: count_components_ge(cs, k) for k in ge_thresholds},
    )


def _run_task(task, config):
    index, n, alpha, nu, trial = task
    return index, run_trial(n, alpha, nu, trial, config.master_seed, config.builder,
                            config.ge_thresholds, config.timing)


def run_scan(config, progress=True):
    """
    Yield one TrialRecord per (cell, trial) in canonical order.

    With more than one worker the trials run in a process pool; the
    ReorderQueue restores canonical order before anything is yielded.
    """
    tasks = config.tasks()
    workers = max_workers_for(max(config.n_grid), config.workers)
    logger.info("run_scan(): %d cells x %d trials on %d worker(s)", len(config.cells()), config.trials, workers)

    bar = tqdm(total=len(tasks), desc='scan', unit='trial', disable=not progress)
    set_progress_bar(bar)
    try:
        if workers <= 1:
            for task in tasks:
                _, record = _run_task(task, config)
                bar.update(1)
                update_status(f"n={record.n:g} alpha={record.alpha:g} trial {record.trial}: L2={record.L2}")
                yield record
            return

        queue = ReorderQueue(len(tasks))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_run_task, task, config) for task in tasks]
            for future in as_completed(futures):
                index, record = future.result()
                queue.put(index, record)
                bar.update(1)
                update_status(f"{queue.records_received}/{queue.total} done, "
                              f"{len(queue.pending)} waiting ({queue.get_pending_size()})")
                yield from queue.drain()
        logger.debug("run_scan(): %s", queue.get_queue_stats())
        if not (queue.is_complete() and queue.is_empty()):
            raise RHGError(f"scan ended with {queue.total - queue.records_emitted} records not released")
    finally:
        set_progress_bar(None)
        bar.close()
