import json

import pytest
from hypothesis import given, strategies as st

from berrymoments.records import OutputRecord, emit_csv, emit_json, parse_csv, parse_json

cells = st.one_of(st.floats(allow_nan=False, allow_infinity=False), st.integers(-10**6, 10**6),
                  st.booleans(), st.none())


def test_json_round_trip():
    rec = OutputRecord("spectrum", {"J": "7/2", "w": 1.0}, [{"energy": -1.5, "multiplicity": 2}],
                       {"class": 2})
    back = parse_json(emit_json(rec))
    assert back == rec
    assert json.loads(emit_json(rec))["schema_version"] == 1


def test_json_version_check():
    text = emit_json(OutputRecord("x", {}, []))
    with pytest.raises(ValueError):
        parse_json(text.replace('"schema_version": 1', '"schema_version": 99'))


@given(st.lists(st.tuples(cells, cells), min_size=1, max_size=6))
def test_csv_round_trip(values):
    rows = [{"a": a, "b": b} for a, b in values]
    back = parse_csv(emit_csv(rows))
    for got, exp in zip(back, rows):
        for k in "ab":
            if isinstance(exp[k], float) and not isinstance(exp[k], bool):
                assert float(got[k]) == exp[k]
            else:
                assert got[k] == exp[k]


def test_csv_empty():
    assert emit_csv([]) == ""
    assert parse_csv("") == []


def test_csv_text_cells():
    rows = [{"name": "4n+-1/2", "n": 3}]
    assert parse_csv(emit_csv(rows)) == rows
