"""Token amounts are plain ``int`` base units; these helpers convert to and from
display decimals without ever touching binary floating point arithmetic."""

from __future__ import annotations

import re
from decimal import Decimal, InvalidOperation

from .errors import AmountOverflow, InvalidAmount

DEFAULT_DECIMALS = 2
# uint256, like an ERC-20 balance slot.
MAX_UNITS = 2**256 - 1

_DISPLAY_RE = re.compile(r"^\d+(\.\d+)?$")


def check_units(value: int) -> int:
    """Validate a base-unit amount: a non-negative int no larger than MAX_UNITS."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidAmount(f"amount must be an integer number of base units, got {value!r}")
    if value < 0:
        raise InvalidAmount(f"amount must be non-negative, got {value}")
    if value > MAX_UNITS:
        raise AmountOverflow(f"amount {value} exceeds the maximum of {MAX_UNITS}")
    return value


def checked_add(a: int, b: int) -> int:
    total = a + b
    if total > MAX_UNITS:
        raise AmountOverflow(f"{a} + {b} overflows the maximum of {MAX_UNITS}")
    return total


def to_units(value: str | int | float | Decimal, decimals: int = DEFAULT_DECIMALS) -> int:
    """Parse a display amount (``"120.00"``, ``120``, ``120.5``) into base units.

    Raises InvalidAmount if the value is negative, malformed, or carries more
    fractional digits than ``decimals`` allows.
    """
    if isinstance(value, bool):
        raise InvalidAmount(f"not an amount: {value!r}")
    if isinstance(value, int):
        dec = Decimal(value)
    elif isinstance(value, float):
        dec = Decimal(repr(value))
    elif isinstance(value, Decimal):
        dec = value
    elif isinstance(value, str):
        text = value.strip()
        if not _DISPLAY_RE.match(text):
            raise InvalidAmount(f"malformed amount {value!r}")
        dec = Decimal(text)
    else:
        raise InvalidAmount(f"not an amount: {value!r}")
    try:
        scaled = dec.scaleb(decimals)
    except InvalidOperation as exc:  # pragma: no cover - Decimal guards above
        raise InvalidAmount(f"malformed amount {value!r}") from exc
    if not scaled.is_finite() or scaled != scaled.to_integral_value():
        raise InvalidAmount(f"{value!r} has more than {decimals} fractional digits")
    return check_units(int(scaled))


def to_display(units: int, decimals: int = DEFAULT_DECIMALS) -> str:
    """Render base units with exactly ``decimals`` fractional digits."""
    sign = "-" if units < 0 else ""
    whole, frac = divmod(abs(units), 10**decimals)
    if decimals == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{decimals}d}"
