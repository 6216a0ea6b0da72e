"""Exception hierarchy for Text2Action."""


class Text2ActionError(Exception):
    """Base class for every error raised by the package."""


class ShapeError(Text2ActionError, ValueError):
    """Tensor or parameter dimensions do not agree."""


class InputError(Text2ActionError, ValueError):
    """Invalid argument, empty input or out-of-range index."""


class ContractError(Text2ActionError, ValueError):
    """An API was used outside its contract."""


class DegeneratePoseError(InputError):
    """A joint offset (or a mean of offsets) has zero length."""


class ParseError(InputError):
    """A line of a data file could not be parsed."""

    def __init__(self, path: str, line_number: int, reason: str):
        self.path = path
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: {reason}")


class DatasetValidationError(InputError):
    """A dataset record breaks one of its invariants."""

    def __init__(self, record_id: str, rule: str):
        self.record_id = record_id
        self.rule = rule
        super().__init__(f"record '{record_id}': {rule}")


class CheckpointError(InputError):
    """A checkpoint file is unreadable or does not hold what was expected."""


class ConfigError(InputError):
    """Run configuration is incomplete or inconsistent."""


class NumericError(Text2ActionError, ArithmeticError):
    """A training quantity became NaN or infinite."""

    def __init__(self, message: str, details: dict | None = None):
        self.details = details or {}
        super().__init__(message)
