"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: ``ParameterError`` -> 2,
``InvariantViolation`` -> 3. The HTTP service maps them onto 400 and 500
responses carrying a machine-readable ``code`` field.
"""


class SparseDoaError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(SparseDoaError, ValueError):
    """A caller supplied an invalid argument or configuration."""


class CapacityError(ParameterError):
    """More sources requested than the virtual array can resolve."""


class InvariantViolation(SparseDoaError, RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""
