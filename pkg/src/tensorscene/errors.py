"""Exception types shared across the package.

The CLI and the HTTP service map these onto exit codes / status codes,
so library code should raise them rather than bare ValueError where the
distinction matters (configuration vs. bad input vs. numerical failure).
"""


class TensorSceneError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(TensorSceneError, ValueError):
    """Array shapes are inconsistent with each other or with the model."""


class InputError(TensorSceneError, ValueError):
    """Input data violates a precondition (too short, degenerate, mismatched)."""


class ConfigurationError(TensorSceneError, ValueError):
    """A configuration value is out of range or internally inconsistent."""


class NumericalError(TensorSceneError, ArithmeticError):
    """A computation produced NaN/Inf or otherwise diverged."""
