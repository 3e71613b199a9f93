import csv

import numpy as np
import pytest

from core.errors import InvalidParameter, IoFailure
from core.scenarios import ExampleScenario
from core.semigroups import TimeGrid
from core.spaces import SpaceTag
from storage.reports import ReportStore, canonical_json, emit_report, format_float


def test_canonical_json_sorts_keys_and_keeps_17_digits():
    assert canonical_json({"b": 0.1, "a": 1}) == '{\n  "a": 1,\n  "b": 0.10000000000000001\n}\n'


def test_canonical_json_flat_lists_stay_inline():
    text = canonical_json({"x": [1.5, 2, True], "y": {"z": None}})
    assert text == '{\n  "x": [1.5, 2, true],\n  "y": {\n    "z": null\n  }\n}\n'


@pytest.mark.parametrize("value, expected", [
    (float("inf"), "inf"),
    (float("-inf"), "-inf"),
    (float("nan"), "nan"),
    (0.5, "0.5"),
])
def test_format_float(value, expected):
    assert format_float(value) == expected


def test_non_finite_floats_become_strings():
    assert canonical_json({"metric": float("inf")}) == '{\n  "metric": "inf"\n}\n'


def test_numpy_and_complex_values():
    data = {"n": np.int64(3), "v": np.array([0.25, 1.0]), "z": 1 - 2j, "space": SpaceTag.L1}
    text = canonical_json(data)
    assert '"n": 3' in text
    assert '"v": [0.25, 1]' in text
    assert '"z": [1, -2]' in text
    assert '"space": "l1"' in text


def test_emit_report_writes_json_and_tables(tmp_path):
    result = ExampleScenario(8, TimeGrid.from_range(0.0, 1.0, 0.1)).run()
    store = ReportStore(str(tmp_path / "out")).open()
    written = emit_report(result, store)
    assert [p.name for p in written] == ["example.json", "trajectories.csv"]

    assert (tmp_path / "out" / "example.json").read_text(encoding="utf-8") == canonical_json(result.to_json())
    with open(tmp_path / "out" / "trajectories.csv", newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["t", "re", "im", "modulus"]
    assert len(rows) == 1 + 11
    assert rows[1] == ["0", "1", "0", "1"]


def test_emit_report_json_only(tmp_path):
    result = ExampleScenario(8, TimeGrid.from_range(0.0, 1.0, 0.1)).run()
    written = emit_report(result, ReportStore(str(tmp_path), formats=("json",)).open())
    assert [p.name for p in written] == ["example.json"]


def test_csv_booleans_are_lowercase(tmp_path):
    store = ReportStore(str(tmp_path)).open()
    path = store.write_csv("flags", ["k", "flag"], [[1, True], [2, False]])
    assert path.read_text(encoding="utf-8") == "k,flag\n1,true\n2,false\n"


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(InvalidParameter):
        ReportStore(str(tmp_path), formats=("json", "xml"))


def test_open_fails_on_a_regular_file(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    with pytest.raises(IoFailure):
        ReportStore(str(blocker)).open()
