"""
Defines exceptions used in the context of this package.
"""


class RandomMemoryWalkError(Exception):
    """Base class of every error raised on purpose by this package."""


class UsageError(RandomMemoryWalkError, ValueError):
    """Error thrown when a function is called with inputs outside of its
    contract, e.g. non-adjacent sites or an empty K-sequence."""


class DomainError(RandomMemoryWalkError, ValueError):
    """Error thrown when a renewal quantity is requested for a memory law
    under which it is degenerate (infinite mean, trivial conditioning)."""


class ConfigurationError(RandomMemoryWalkError):
    """Error thrown when an experiment or walk configuration is invalid.

    Keeps the offending field and, when known, the file and line where
    it was set so the command line can point at it.
    """

    def __init__(self, message, field=None, line=None, source=None):
        self.field = field
        self.line = line
        self.source = source
        if source is not None and line is not None:
            message = '{}:{}: {}'.format(source, line, message)
        elif source is not None:
            message = '{}: {}'.format(source, message)
        super().__init__(message)


class ResourceLimitError(RandomMemoryWalkError, MemoryError):
    """Error thrown before a run starts when the requested history or
    step log would not fit in the configured budget."""


class EllipticityError(RandomMemoryWalkError):
    """Error thrown when a kernel assigns a neighbor a probability below
    the configured ellipticity floor."""


class SymmetryError(RandomMemoryWalkError):
    """Error thrown when a kernel output changes under a lattice symmetry
    fixing the current site."""


class InsufficientDataError(RandomMemoryWalkError, ValueError):
    """Error thrown when an estimator or test does not get enough data."""


class AnalysisInputError(RandomMemoryWalkError):
    """Error thrown when an artifact directory lacks the inputs an analysis
    needs."""

    def __init__(self, message, missing=None):
        self.missing = list(missing) if missing is not None else []
        super().__init__(message)


class OutputError(RandomMemoryWalkError):
    """Error thrown when artifacts cannot be written to the output
    directory."""
