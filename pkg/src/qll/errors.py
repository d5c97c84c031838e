"""Exception hierarchy shared across the package."""


class QLLError(Exception):
    """Base class for all package errors."""


class ChartDomainError(QLLError):
    """A queried point lies outside the chart of the ambient space."""


class GeometryError(QLLError):
    """Geometric data is degenerate (non-SPD metric, collapsed surface node, ...)."""


class CatalogError(QLLError, ValueError):
    """Unknown catalog entry or invalid catalog parameters."""


class NumericError(QLLError):
    """Non-finite data or a degenerate denominator in a numeric operation."""


class HypothesisError(QLLError):
    """A theorem hypothesis is violated (e.g. H <= 0 where an integrand divides by H)."""


class EmbeddingError(QLLError):
    """Reference isometric embedding is outside the supported (round) class."""


class ConfigError(QLLError):
    """Invalid run configuration or missing optional data (e.g. electric field)."""


class FlowError(QLLError):
    """Gradient flow failed; carries the last valid state when available."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
