import sys
from time import time


def progress(count, total, status='', bar_length=50, stream=None):
    """
    Draws a one-line terminal progress bar, overwritten in place.

    :param count: units done, int
    :param total: units overall, int
    :param status: text appended after the bar
    :param stream: file object, stderr by default so data on stdout stays
        clean
    """
    stream = sys.stderr if stream is None else stream
    fraction = count / float(total) if total else 1.0
    filled = int(round(bar_length * fraction))
    bar = '#' * filled + '.' * (bar_length - filled)
    stream.write('\r[{}] {:5.1f}% {}'.format(bar, 100.0 * fraction, status))
    stream.flush()


class ProgressReporter(object):
    """
    Progress over a known number of units (steps or replicas), redrawn at
    most `updates` times.
    """

    def __init__(self, total, label='', updates=100, stream=None):
        self._total = total
        self._label = label
        self._every = max(total // updates, 1)
        self._stream = stream
        self._start = time()
        self._done = 0

    def advance(self, count=1):
        self._done += count
        if self._done % self._every == 0 or self._done >= self._total:
            minutes = (time() - self._start) / 60.
            progress(self._done, self._total,
                     status='{} {:.2f} minutes'.format(self._label, minutes),
                     stream=self._stream)

    def close(self):
        stream = sys.stderr if self._stream is None else self._stream
        stream.write('\n')
        stream.flush()
