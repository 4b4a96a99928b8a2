# Copyright (c) 2026, Abhishek and Contributors
# See license.txt

import json
import math

import numpy as np
import pytest

from hyperlab.hyperlab.exceptions import ConfigError
from hyperlab.hyperlab.utils import get_attr
from hyperlab.hyperlab.utils.records import (
    CSV_COLUMNS,
    format_cell,
    plain,
    read_trials_csv,
    write_summary_json,
    write_trials_csv,
)


class TestFormatting:
    def test_floats_round_trip(self):
        value = 0.1 + 0.2
        assert float(format_cell(value)) == value
        assert format_cell(np.float64(value)) == repr(value)

    def test_cells(self):
        assert format_cell(None) == ""
        assert format_cell(True) == "true"
        assert format_cell(np.bool_(False)) == "false"
        assert format_cell(np.int64(7)) == "7"
        assert format_cell(math.inf) == "inf"

    def test_plain(self):
        assert plain({"a": np.array([1.5, 2.0]), 3: (np.int64(1),)}) == {"a": [1.5, 2.0], "3": [1]}


class TestReportFiles:
    def test_rows_sorted_by_seed_then_radius(self, tmp_path):
        rows = [
            {"experiment": "game", "seed": 2, "r": 8.0},
            {"experiment": "game", "seed": 1, "r": 12.0},
            {"experiment": "game", "seed": 1, "r": 8.0, "queries": 3, "success": True},
        ]
        path = write_trials_csv(tmp_path / "out" / "game.csv", rows)
        read = read_trials_csv(path)
        assert list(read[0]) == list(CSV_COLUMNS)
        assert [(row["seed"], row["r"]) for row in read] == [("1", "8.0"), ("1", "12.0"), ("2", "8.0")]
        assert read[0]["success"] == "true"
        assert read[1]["queries"] == ""

    def test_summary_embeds_hash(self, tmp_path):
        path = write_summary_json(tmp_path / "s.json", {"fit": np.float64(0.5)}, "abc", {"r": 8.0})
        document = json.loads(path.read_text())
        assert document == {"config_hash": "abc", "config": {"r": 8.0}, "summary": {"fit": 0.5}}


class TestGetAttr:
    def test_resolves(self):
        assert get_attr("hyperlab.hyperlab.utils.records.plain") is plain

    @pytest.mark.parametrize(
        "path", ["plain", "hyperlab.hyperlab.nowhere.thing", "hyperlab.hyperlab.utils.records.missing"]
    )
    def test_errors(self, path):
        with pytest.raises(ConfigError):
            get_attr(path)
