from decimal import Decimal

import pytest

from sfcoin.amounts import MAX_UNITS, checked_add, check_units, to_display, to_units
from sfcoin.canonical import canonical_json, digest
from sfcoin.errors import AmountOverflow, InvalidAmount


@pytest.mark.parametrize(
    "value, units",
    [("4000.00", 400000), ("120", 12000), ("0.01", 1), (50, 5000), (5.7, 570), (Decimal("108.30"), 10830)],
)
def test_to_units(value, units):
    assert to_units(value, 2) == units


@pytest.mark.parametrize("value", ["1.001", "-1", "abc", "1e3", True, None, 0.001])
def test_to_units_rejects(value):
    with pytest.raises(InvalidAmount):
        to_units(value, 2)


def test_display_round_trip():
    for units in (0, 1, 99, 100, 570, 388000, 10**20 + 7):
        assert to_units(to_display(units, 2), 2) == units
    assert to_display(570, 2) == "5.70"
    assert to_display(5, 0) == "5"


def test_overflow_is_an_error():
    assert check_units(MAX_UNITS) == MAX_UNITS
    with pytest.raises(AmountOverflow):
        check_units(MAX_UNITS + 1)
    with pytest.raises(AmountOverflow):
        checked_add(MAX_UNITS, 1)
    with pytest.raises(InvalidAmount):
        check_units(-1)


def test_canonical_json_form():
    assert canonical_json({"b": 1, "a": [1.0, 0.5, "é"]}) == '{"a":[1,0.5,"é"],"b":1}'
    assert canonical_json({"x": 0.1}) == '{"x":0.1}'
    with pytest.raises(ValueError):
        canonical_json({"x": float("nan")})


def test_digest_is_lowercase_sha256():
    d = digest({"a": 1})
    assert len(d) == 64 and d == d.lower()
    assert d == digest({"a": 1.0})
