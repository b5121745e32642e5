"""Exception hierarchy shared by all spinlab modules."""


class SpinlabError(Exception):
    """Base class for every error raised by spinlab."""


class DomainError(SpinlabError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class InvalidSizeError(DomainError):
    """Qubit count is odd or nonpositive."""


class DimensionMismatchError(SpinlabError, ValueError):
    """Array or partition sizes are inconsistent with each other."""


class NormalizationError(SpinlabError, ValueError):
    """A state vector is not normalized."""


class InvalidDensityError(SpinlabError, ValueError):
    """A density matrix has a negative eigenvalue or the wrong trace."""


class AsymmetryError(SpinlabError, ValueError):
    """A matrix that must be symmetric is not."""


class ConvergenceError(SpinlabError, ArithmeticError):
    """An iterative eigensolver did not converge."""


class BoundaryError(DomainError):
    """Parameters sit exactly on a zone boundary of the classical model."""


class ConsistencyError(SpinlabError, AssertionError):
    """Numerically derived stability disagrees with the expected zone structure."""


class ConfigError(SpinlabError, ValueError):
    """Experiment configuration could not be parsed or validated."""
