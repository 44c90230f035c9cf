"""
Reorder queue between the worker pool and the record writer.

Trials finish in whatever order the pool schedules them; records must leave
in canonical (n, alpha, nu, trial) order. Finished records wait here until
every earlier index has arrived.
"""
import logging

from utils.memory import format_size

logger = logging.getLogger(__name__)

# Approximate in-memory size of one pending TrialRecord.
RECORD_BYTES = 512


class ReorderQueue:
    """
    Holds out-of-order records and releases them by index.

    Example usage:
        queue = ReorderQueue(total=len(tasks))
        queue.put(3, record3)           # nothing released yet
        queue.put(0, record0)
        list(queue.drain())             # [record0]
    """

    def __init__(self, total):
        self.total = int(total)
        self.pending = {}
        self.next_index = 0

        # Progress tracking
        self.records_received = 0
        self.records_emitted = 0
        self.max_pending = 0

    def put(self, index, record):
        """Store the record of task `index`."""
        if index < self.next_index or index in self.pending:
            raise ValueError(f"record {index} delivered twice")
        self.pending[index] = record
        self.records_received += 1
        self.max_pending = max(self.max_pending, len(self.pending))

    def drain(self):
        """Yield every record whose predecessors have all been released."""
        while self.next_index in self.pending:
            record = self.pending.pop(self.next_index)
            self.next_index += 1
            self.records_emitted += 1
            yield record

    def is_empty(self):
        return not self.pending

    def is_complete(self):
        return self.records_emitted == self.total

    def get_pending_size(self):
        """Memory held by waiting records, human readable."""
        return format_size(RECORD_BYTES * len(self.pending))

    def get_queue_stats(self):
        """Get current queue statistics."""
        return {
            'records_received': self.records_received,
            'records_emitted': self.records_emitted,
            'records_pending': len(self.pending),
            'max_pending': self.max_pending,
            'total': self.total,
        }
