"""
This module defines the value objects produced by a run: the regeneration
report and the per-replica run summary, with their serialized forms.
"""
import hashlib
import json
import numpy as np


class RegenerationReport(object):
    """
    Confirmed regeneration indices of one K-sequence.

    `increments` holds one entry [dt, dy_0, ..., dy_{d-1}] per pair of
    consecutive confirmed regenerations; before the sub-walk is extracted
    the entries only carry dt.
    """

    def __init__(self, regen_indices, censored_from, increments=None,
                 horizon=None):
        self._regen_indices = [int(n) for n in regen_indices]
        if any(b <= a for a, b in zip(self._regen_indices,
                                      self._regen_indices[1:])):
            raise ValueError('Regeneration indices must be strictly '
                             'increasing')
        self._censored_from = int(censored_from)
        self._horizon = horizon
        if increments is None:
            increments = [[b - a] for a, b in zip(self._regen_indices,
                                                   self._regen_indices[1:])]
        self._increments = [list(row) for row in increments]

    @property
    def regen_indices(self):
        return self._regen_indices

    @property
    def censored_from(self):
        return self._censored_from

    @property
    def horizon(self):
        return self._horizon

    @property
    def increments(self):
        return self._increments

    @property
    def time_increments(self):
        return [row[0] for row in self._increments]

    @property
    def space_increments(self):
        return [row[1:] for row in self._increments]

    def with_increments(self, increments):
        return RegenerationReport(self._regen_indices, self._censored_from,
                                  increments=increments,
                                  horizon=self._horizon)

    def to_dict(self):
        return {'regens': self._regen_indices,
                'censored_from': self._censored_from,
                'increments': self._increments}

    def to_json_line(self):
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(',', ':'))

    @classmethod
    def from_dict(cls, values):
        return cls(values['regens'], values['censored_from'],
                   increments=values.get('increments'))

    def __eq__(self, other):
        return isinstance(other, RegenerationReport) \
            and self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'RegenerationReport(regens={}, censored_from={})'.format(
            self._regen_indices, self._censored_from)


def k_sequence_digest(ks):
    """SHA-256 hex digest of the K-sequence as little-endian int64."""
    if ks is None:
        return None
    data = np.ascontiguousarray(np.asarray(ks, dtype='<i8')).tobytes()
    return hashlib.sha256(data).hexdigest()


class RunSummary(object):
    """
    Per-replica outputs in a stable serializable form.

    Full K-sequences and stride histories stay in memory only; the
    serialized row carries the K-sequence digest.
    """

    def __init__(self, replica, final, return_times, checkpoints=None,
                 range_size=0, report=None, subwalk_returns=None,
                 k_sequence=None, k_seq_digest=None, history=None):
        self._replica = int(replica)
        self._final = tuple(int(c) for c in final)
        self._return_times = [int(n) for n in return_times]
        self._checkpoints = {int(n): tuple(int(c) for c in site)
                             for n, site in (checkpoints or {}).items()}
        self._range_size = int(range_size)
        self._report = report
        self._subwalk_returns = subwalk_returns
        self._k_sequence = k_sequence
        if k_seq_digest is None:
            k_seq_digest = k_sequence_digest(k_sequence)
        self._k_seq_digest = k_seq_digest
        self._history = history

    @property
    def replica(self):
        return self._replica

    @property
    def final(self):
        return self._final

    @property
    def dimension(self):
        return len(self._final)

    @property
    def return_times(self):
        return self._return_times

    @property
    def returns(self):
        return len(self._return_times)

    @property
    def last_return(self):
        return self._return_times[-1] if self._return_times else 0

    @property
    def checkpoints(self):
        return self._checkpoints

    @property
    def range_size(self):
        return self._range_size

    @property
    def report(self):
        return self._report

    @property
    def subwalk_returns(self):
        return self._subwalk_returns

    @property
    def k_sequence(self):
        return self._k_sequence

    @property
    def k_seq_digest(self):
        return self._k_seq_digest

    @property
    def history(self):
        return self._history

    def with_report(self, report, subwalk_returns=None):
        return RunSummary(self._replica, self._final, self._return_times,
                          checkpoints=self._checkpoints,
                          range_size=self._range_size, report=report,
                          subwalk_returns=subwalk_returns,
                          k_sequence=self._k_sequence,
                          k_seq_digest=self._k_seq_digest,
                          history=self._history)

    def to_dict(self):
        row = {
            'replica': self._replica,
            'final': list(self._final),
            'returns': self.returns,
            'last_return': self.last_return,
            'return_times': self._return_times,
            'checkpoints': [[n] + list(site) for n, site
                            in sorted(self._checkpoints.items())],
            'range_size': self._range_size,
            'K_seq_digest': self._k_seq_digest,
            'regens': None,
            'censored_from': None,
            'increments': None,
            'subwalk_returns': self._subwalk_returns
        }
        if self._report is not None:
            row.update(self._report.to_dict())
        return row

    def to_json_line(self):
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(',', ':'))

    @classmethod
    def from_dict(cls, row):
        report = None
        if row.get('regens') is not None:
            report = RegenerationReport(row['regens'], row['censored_from'],
                                        increments=row.get('increments'))
        checkpoints = {entry[0]: tuple(entry[1:])
                       for entry in row.get('checkpoints') or []}
        return cls(row['replica'], row['final'], row.get('return_times', []),
                   checkpoints=checkpoints,
                   range_size=row.get('range_size', 0), report=report,
                   subwalk_returns=row.get('subwalk_returns'),
                   k_seq_digest=row.get('K_seq_digest'))

    @classmethod
    def from_json_line(cls, line):
        return cls.from_dict(json.loads(line))
