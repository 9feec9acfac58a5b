"""Exception types shared across the package."""


class QaoaLinearError(Exception):
    """Base class for all package-specific errors."""


class ResourceLimitError(QaoaLinearError):
    """A request would exceed a configured resource cap.

    Raised by the dense statevector simulator when the qubit count is
    above the allowed maximum, before any allocation happens.
    """


class DegenerateProbabilityError(QaoaLinearError):
    """A success probability is too small to be useful.

    Raised by the sampling harness when the expected number of trials
    would be astronomically large (probability below 1e-9).
    """
