import json

import numpy as np
import pytest

import config
from results_output import format_results, output_results


ROWS = [{"N": 10_000, "value_re": 0.1, "bound_ratio": None, "n_terms": np.int64(7)}]


def test_csv_header_and_cells():
    text = format_results(ROWS, "csv", header={"subcommand": "expsum", "gamma": 0.95},
                          columns=["N", "value_re", "bound_ratio", "n_terms"])
    lines = text.splitlines()
    assert lines[0] == "# subcommand: expsum"
    assert lines[1] == "# gamma: 0.95"
    assert any(line.startswith("# version.numpy: ") for line in lines)
    body = [line for line in lines if not line.startswith("#")]
    assert body == ["N,value_re,bound_ratio,n_terms", "10000,0.1,,7"]


def test_csv_floats_keep_full_precision():
    value = 1 / 3
    text = format_results([{"x": value}], "csv")
    assert float(text.splitlines()[-1]) == value


def test_json_body():
    body = json.loads(format_results(ROWS, "json", header={"subcommand": "expsum"}))
    assert body["schema"] == config.SCHEMA_VERSION
    assert body["config"] == {"subcommand": "expsum"}
    assert body["versions"]["hecke_sums"] == config.VERSION
    assert body["rows"] == [{"N": 10_000, "value_re": 0.1, "bound_ratio": None, "n_terms": 7}]


def test_unknown_format():
    with pytest.raises(ValueError):
        format_results(ROWS, "xml")


def test_output_to_file(tmp_path):
    target = tmp_path / "rows.json"
    output_results(ROWS, "json", str(target))
    assert json.loads(target.read_text())["rows"][0]["N"] == 10_000
