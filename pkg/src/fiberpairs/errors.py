"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 1, data
inconsistencies exit 2, I/O failures exit 3.
"""


class ConfigError(ValueError):
    """A configuration value or combination of values is invalid."""


class DataInconsistencyError(ValueError):
    """Measured counts are incompatible with the count model."""


class NegativeRateError(DataInconsistencyError):
    """Inversion produced a negative generation rate (strict mode).

    Carries the offending field name and value so callers can report
    which arm's calibration is suspect.
    """

    def __init__(self, field: str, value: float):
        self.field = field
        self.value = value
        super().__init__(
            f"inverted {field} is negative ({value:.6g}); "
            "check efficiency and dark-count calibration, or invert leniently"
        )


class ModelValidityError(ValueError):
    """Model inputs are too large for the linearized count model."""


class RankDeficiencyError(ValueError):
    """Fit input does not constrain all model coefficients."""


class NegativeRateWarning(UserWarning):
    """Lenient inversion clamped a negative rate to zero."""
