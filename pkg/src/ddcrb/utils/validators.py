import math

import validators

from .errors import DomainError

# validators.between compares same-typed operands only; numpy scalars are coerced first.


def require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be > 0, got {value}")
    return value


def require_non_negative(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or validators.between(value, min_val=0.0) is not True:  # pyright: ignore[reportAttributeAccessIssue]
        raise DomainError(f"{name} must be >= 0, got {value}")
    return value


def require_between(name: str, value: float, low: float, high: float) -> float:
    value = float(value)
    in_range = validators.between(value, min_val=float(low), max_val=float(high))  # pyright: ignore[reportAttributeAccessIssue]
    if not math.isfinite(value) or in_range is not True:
        raise DomainError(f"{name} must be within [{low}, {high}], got {value}")
    return value


def require_int_at_least(name: str, value: int, low: int) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise DomainError(f"{name} must be an integer >= {low}, got {value}")
    value = int(value)
    if validators.between(value, min_val=int(low)) is not True:  # pyright: ignore[reportAttributeAccessIssue]
        raise DomainError(f"{name} must be an integer >= {low}, got {value}")
    return value
