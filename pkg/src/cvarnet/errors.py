"""Exception hierarchy shared across the package."""


class CvarnetError(Exception):
    """Base class for all package errors."""


class SchemaError(CvarnetError):
    """CSV header or cell does not conform to the expected schema."""


class ContinuityError(CvarnetError):
    """Period index has a gap or a duplicate."""


class AlignmentError(CvarnetError):
    """GDP and CPI calendars have an empty intersection."""


class LabelMismatchError(CvarnetError):
    """Label sets of the two series sets differ."""

    def __init__(self, only_gdp, only_cpi):
        self.only_gdp = sorted(only_gdp)
        self.only_cpi = sorted(only_cpi)
        super().__init__(
            f"label sets differ: only in GDP {self.only_gdp}, only in CPI {self.only_cpi}"
        )


class InsufficientDataError(CvarnetError):
    """Too few observations for the requested operation."""


class DimensionError(CvarnetError):
    """Sample too short for the requested lag order / regressor count."""


class SingularDesignError(CvarnetError):
    """Design matrix is numerically rank deficient."""

    def __init__(self, message, columns=None):
        self.columns = list(columns) if columns is not None else []
        super().__init__(message)


class DefinitenessError(CvarnetError):
    """A covariance matrix is not positive definite where required."""


class StationarityError(CvarnetError):
    """Generator spec is not stationary (companion spectral radius >= 1)."""


class DegenerateFitError(CvarnetError):
    """Fit is degenerate (e.g. zero residual variance) for a diagnostic."""


class ConfigError(CvarnetError):
    """Invalid run configuration."""
