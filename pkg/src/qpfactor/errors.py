"""Exception taxonomy for qpfactor.

Every error raised by the library derives from QpfactorError and carries a
stable machine-readable ``name`` that the CLI prints on failure.
"""


class QpfactorError(Exception):
    """Base class for all qpfactor errors."""

    name = "error"


class InvalidArgumentError(QpfactorError, ValueError):
    """A parameter value is out of range or inconsistent with the data."""

    name = "invalid-argument"


class FormatError(QpfactorError, ValueError):
    """A file or in-memory payload does not match the expected layout."""

    name = "format-error"


class SignalIOError(QpfactorError, OSError):
    """Reading or writing a signal file failed at the OS level."""

    name = "io-error"


class EmptyEmbeddingError(QpfactorError):
    """No sample admits all requested delay offsets."""

    name = "empty-embedding"


class LiftFailureError(QpfactorError):
    """A mod-p cocycle has no integer lift on the chosen scale."""

    name = "lift-failure"


class CoverageError(QpfactorError):
    """A point is too far from every landmark to receive a phase."""

    name = "coverage-error"


class NotPeriodicError(QpfactorError):
    """The recovered phase does not wind: no period can be estimated."""

    name = "not-periodic"
