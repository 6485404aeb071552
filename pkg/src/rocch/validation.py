"""Input validation helpers shared across the package."""

from __future__ import annotations

import math
import numbers


def check_finite(name: str, value) -> None:
    """Reject NaN/inf for any real-valued input."""
    if not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


def check_positive(name: str, value) -> None:
    check_finite(name, value)
    if not value > 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")


def check_unit_interval(name: str, value) -> None:
    check_finite(name, value)
    if not 0 <= value <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def check_open_unit_interval(name: str, value) -> None:
    check_finite(name, value)
    if not 0 < value < 1:
        raise ValueError(f"{name} must lie strictly inside (0, 1), got {value!r}")


def as_range(name: str, value) -> tuple:
    """Coerce a scalar or a (lo, hi) pair into an ordered pair."""
    if isinstance(value, numbers.Real):
        return (value, value)
    try:
        lo, hi = value
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a number or a (lo, hi) pair, got {value!r}") from None
    if hi < lo:
        raise ValueError(f"{name} range is empty: lo={lo!r} > hi={hi!r}")
    return (lo, hi)
