"""
Persistence of TrialRecords.

Writers share one life cycle (open, write per record, close) and flush to
disk every FLUSH_EVERY records:
- CsvRecordWriter: fixed header, then ge_<k> columns
- JsonlRecordWriter: one JSON object per line, same fields as the CSV
- H5RecordWriter: one resizable dataset per column plus run metadata attributes

CSV and JSONL output is a pure function of the records; the HDF5 store also
carries its creation time.
"""
import json
import logging

import h5py
import numpy as np
import pandas as pd

from utils.errors import ParameterError, RecordIOError
from utils.system_info import run_metadata

logger = logging.getLogger(__name__)

FLUSH_EVERY = 100

# Columns not listed are int64.
H5_DTYPES = {
    'n': np.float64,
    'alpha': np.float64,
    'nu': np.float64,
    'ms': np.float64,
    'seed': np.uint64,
    'builder': h5py.string_dtype(),
}


class RecordWriter:
    """Base writer; subclasses implement _open, _write_rows and _close."""

    def __init__(self, path, columns):
        self.path = str(path)
        self.columns = list(columns)
        self.buffer = []
        self.records_written = 0

    def __enter__(self):
        try:
            self._open()
        except OSError as e:
            raise RecordIOError(self.path, f"cannot open for writing: {e}") from e
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False

    def write(self, record):
        self.buffer.append(record.as_row())
        if len(self.buffer) >= FLUSH_EVERY:
            self.flush()

    def flush(self):
        if not self.buffer:
            return
        try:
            self._write_rows(self.buffer)
        except OSError as e:
            raise RecordIOError(self.path, f"write failed: {e}") from e
        self.records_written += len(self.buffer)
        self.buffer = []

    def close(self):
        try:
            self.flush()
        finally:
            self._close()
        logger.info("%s.close(): %d records in %s", type(self).__name__, self.records_written, self.path)

    def _open(self):
        pass

    def _close(self):
        pass

    def _write_rows(self, rows):
        raise NotImplementedError


class CsvRecordWriter(RecordWriter):

    def _open(self):
        pd.DataFrame(columns=self.columns).to_csv(self.path, index=False)

    def _write_rows(self, rows):
        pd.DataFrame(rows, columns=self.columns).to_csv(self.path, mode='a', header=False, index=False)


class JsonlRecordWriter(RecordWriter):

    def _open(self):
        self.file = open(self.path, 'w')

    def _write_rows(self, rows):
        for row in rows:
            self.file.write(json.dumps({k: _plain(row[k]) for k in self.columns}) + '\n')
        self.file.flush()

    def _close(self):
        if getattr(self, 'file', None):
            self.file.close()
            self.file = None


class H5RecordWriter(RecordWriter):
    """Columns are grown in place, like frames appended to a recording."""

    def _open(self):
        self.file = h5py.File(self.path, 'w')
        self.file.attrs.update(run_metadata())
        self.file.attrs['columns'] = json.dumps(self.columns)
        self.datasets = {}
        for name in self.columns:
            dtype = H5_DTYPES.get(name, np.int64)
            self.datasets[name] = self.file.create_dataset(name, shape=(0,), maxshape=(None,), dtype=dtype, chunks=True)

    def _write_rows(self, rows):
        first = self.records_written
        for name, dataset in self.datasets.items():
            dataset.resize(first + len(rows), axis=0)
            dataset[first:] = [row[name] for row in rows]
        self.file.flush()

    def _close(self):
        if getattr(self, 'file', None):
            self.file.close()
            self.file = None


WRITER_TYPES = {
    'csv': CsvRecordWriter,
    'jsonl': JsonlRecordWriter,
    'h5': H5RecordWriter,
}


def _plain(value):
    """numpy scalars to Python values for json."""
    return value.item() if isinstance(value, np.generic) else value


def get_writer(fmt, path, columns):
    writer_class = WRITER_TYPES.get(fmt)
    if writer_class is None:
        raise ParameterError(f"unknown record format '{fmt}', choose from {sorted(WRITER_TYPES)}")
    return writer_class(path, columns)


def format_for(path):
    """Record format implied by a file suffix; csv by default."""
    path = str(path)
    if path.endswith('.jsonl'):
        return 'jsonl'
    if path.endswith(('.h5', '.hdf5')):
        return 'h5'
    return 'csv'


def write_records(records, path, columns, fmt=None):
    """Write an iterable of TrialRecords; returns the number written."""
    with get_writer(fmt or format_for(path), path, columns) as writer:
        for record in records:
            writer.write(record)
    return writer.records_written


def read_records(path, fmt=None):
    """Load records of any format into a DataFrame."""
    fmt = fmt or format_for(path)
    try:
        if fmt == 'csv':
            return pd.read_csv(path)
        if fmt == 'jsonl':
            return pd.read_json(path, lines=True)
        if fmt == 'h5':
            with h5py.File(path, 'r') as file:
                columns = json.loads(file.attrs['columns'])
                data = {name: file[name][()] for name in columns}
            data['builder'] = [b.decode() if isinstance(b, bytes) else b for b in data['builder']]
            return pd.DataFrame(data, columns=columns)
    except (OSError, ValueError, KeyError) as e:
        raise RecordIOError(path, f"cannot read records: {e}") from e
    raise ParameterError(f"unknown record format '{fmt}'")
