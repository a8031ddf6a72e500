"""Exception types raised across the package.

The CLI maps these onto process exit codes, so each class corresponds to one
failure family rather than one call site.
"""


class SraeError(Exception):
    """Base class for all package errors."""


class DimensionError(SraeError, ValueError):
    pass


class NotHermitianError(SraeError, ValueError):
    pass


class NotPSDError(SraeError, ValueError):
    pass


class InvalidStateError(SraeError, ValueError):
    """A state failed validation (norm, trace, hermiticity, positivity, parsing)."""


class WindowError(SraeError, ValueError):
    """A Renyi order or power lies outside the range where a formula holds."""


class MissingConcurrenceError(SraeError, ValueError):
    """A mixed-state squared concurrence was needed but no source was given."""


class MissingDecompositionError(SraeError, ValueError):
    """A mixed-state convex roof was needed but neither an ensemble nor a search config was given."""
