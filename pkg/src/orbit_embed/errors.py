"""Exception types shared across the package."""


class OrbitEmbedError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionError(OrbitEmbedError):
    """A signal, index, or matrix has the wrong dimension."""


class ParameterError(OrbitEmbedError):
    """A numeric parameter is outside its valid range."""


class FormError(OrbitEmbedError):
    """An operation received an action in the wrong form (diagonal vs translation)."""


class DataError(OrbitEmbedError):
    """Input data is malformed: non-finite entries, ragged records, bad fields."""


class HypothesisError(OrbitEmbedError):
    """Preconditions of the lower-Lipschitz degeneration sweep are not met."""
