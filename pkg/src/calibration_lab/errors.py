"""Exception hierarchy shared by the library and the command-line front end."""

from __future__ import annotations


class CalibrationLabError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(CalibrationLabError, ValueError):
    """A forecaster, rule, strategy or experiment was configured with bad values.

    ``field`` is a dotted path to the offending entry when one is known.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class InputError(CalibrationLabError, ValueError):
    """Input data (bit strings, outcome streams, trace files) is malformed or too short."""


class PrefixFormatError(InputError):
    def __init__(self, text: str, position: int):
        self.position = position
        super().__init__(f"invalid character {text[position]!r} at index {position}; expected '0' or '1'")


class InvalidForecastError(CalibrationLabError):
    """A forecaster produced something that is not a finite probability."""

    def __init__(self, day: int, value: object = None, reason: str | None = None):
        self.day = day
        self.value = value
        msg = f"invalid forecast at day {day}"
        if reason:
            msg += f": {reason}"
        elif value is not None:
            msg += f": {value!r}"
        super().__init__(msg)


class PriorContradicted(CalibrationLabError):
    """The observed prefix has probability zero under a mixture prior."""


class TerminationBoundViolated(CalibrationLabError):
    """A Player-2 turn ran past its bit budget; stats were corrupt or forecasts invalid."""


class StrategyError(CalibrationLabError):
    """A Player-1 strategy returned an illegal move."""
