import csv
import json
from io import StringIO

import pytest

import eigenforms
import hecke_sums


def run(capsys, *argv):
    code = hecke_sums.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(StringIO("\n".join(body))))


def test_tau_miss_then_hit(cache_dir, capsys):
    code, out, err = run(capsys, "tau", "--n-max", "50", "--cache-dir", str(cache_dir))
    assert code == 0
    assert "cache miss" in err
    row = csv_rows(out)[0]
    assert int(row["tau_n_max"]) == eigenforms.compute_tau(50)[50]
    assert "# subcommand: tau" in out

    eigenforms._table_cache.clear()
    code, _, err = run(capsys, "tau", "--n-max", "40", "--cache-dir", str(cache_dir))
    assert code == 0 and "cache hit" in err


def test_corrupt_cache_exit_code(cache_dir, capsys):
    eigenforms.cache_path(cache_dir).write_text("TAUCACHE v1 3\n1\n-24\n252\nCRC32 00000000\n")
    code, _, err = run(capsys, "tau", "--n-max", "30", "--cache-dir", str(cache_dir))
    assert code == 3
    assert "--force" in err

    code, _, err = run(capsys, "tau", "--n-max", "30", "--force", "--cache-dir", str(cache_dir))
    assert code == 0 and "rebuilding" in err


def test_missing_cache_hint(cache_dir, capsys):
    code, _, err = run(capsys, "expsum", "--kind", "hecke", "--N", "1e3", "--cache-dir", str(cache_dir))
    assert code == 3
    assert "tau --n-max 2000" in err


def test_expsum_empty_range(cache_dir, capsys):
    code, out, _ = run(capsys, "expsum", "--kind", "unit", "--N", "1000", "--N-prime", "1000",
                       "--method", "both", "--cache-dir", str(cache_dir))
    assert code == 0
    rows = csv_rows(out)
    assert [r["method"] for r in rows] == ["direct", "farey"]
    assert all(r["n_terms"] == "0" and float(r["abs_value"]) == 0.0 for r in rows)


def test_expsum_methods_agree_json(cache_dir, capsys):
    run(capsys, "tau", "--n-max", "4000", "--cache-dir", str(cache_dir))
    code, out, _ = run(capsys, "expsum", "--kind", "hecke", "--N", "2000", "--method", "both",
                       "--Q", "20", "-f", "json", "--cache-dir", str(cache_dir))
    assert code == 0
    body = json.loads(out)
    assert body["config"]["subcommand"] == "expsum"
    direct, regrouped = body["rows"]
    assert abs(direct["value_re"] - regrouped["value_re"]) < 1e-9
    assert abs(direct["value_im"] - regrouped["value_im"]) < 1e-9


def test_expsum_bad_range_is_usage_error(cache_dir, capsys):
    code, _, err = run(capsys, "expsum", "--kind", "unit", "--N", "100", "--N-prime", "300",
                       "--cache-dir", str(cache_dir))
    assert code == 2
    assert "N <= N' <= 2N" in err


def test_farey_table(cache_dir, capsys, tmp_path):
    target = tmp_path / "arcs.csv"
    code, out, _ = run(capsys, "farey", "--N", "1e4", "--Q", "40", "-o", str(target),
                       "--cache-dir", str(cache_dir))
    assert code == 0 and out == ""
    rows = csv_rows(target.read_text())
    assert float(rows[0]["lo"]) == 10_000 and float(rows[-1]["hi"]) == 20_000
    assert sum(int(r["count"]) for r in rows) == 10_000


def test_ps_summary(cache_dir, capsys):
    code, out, _ = run(capsys, "ps", "--c", "1.05", "--N", "1e3", "--cache-dir", str(cache_dir))
    assert code == 0
    row = csv_rows(out)[0]
    assert row["max_interior_discrepancy"] == "0"


@pytest.mark.parametrize("argv", [
    ["tau", "--n-max", "60"],
    ["expsum", "--kind", "unit", "--N", "1000", "--method", "both"],
    ["ps", "--c", "1.05", "--N", "1e3"],
    ["ps", "--c", "1.05", "--N", "1e3", "-f", "json"],
])
def test_repeated_runs_write_identical_bytes(argv, cache_dir, capsys, tmp_path):
    outputs = []
    for attempt in ("first", "second"):
        target = tmp_path / f"{attempt}.out"
        eigenforms._table_cache.clear()
        code, out, _ = run(capsys, *argv, "-o", str(target), "--cache-dir", str(cache_dir))
        assert code == 0 and out == ""
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0]


def test_ps_report_grid(cache_dir, capsys):
    code, out, err = run(capsys, "report", "--kind", "ps", "--c", "1.05", "--Ns", "1e4", "1e3",
                         "--cache-dir", str(cache_dir))
    assert code == 0, err
    rows = csv_rows(out)
    assert [r["N"] for r in rows] == ["1000", "10000"]
    deviations = [abs(float(r["ratio"]) - 1.0) for r in rows]
    assert deviations[1] < deviations[0]


def test_ps_report_fails_on_growing_deviation(cache_dir, capsys, monkeypatch):
    monkeypatch.setattr(hecke_sums.piatetski, "ratio_trend", lambda reports: (False, [0.1, 0.2]))
    code, out, err = run(capsys, "report", "--kind", "ps", "--Ns", "1e3", "2e3",
                         "--cache-dir", str(cache_dir))
    assert code == 1
    assert len(csv_rows(out)) == 2
    assert "FAILED ps.lambda_square_trend" in err


def test_ps_rejects_c_outside_range(cache_dir, capsys):
    code, _, err = run(capsys, "ps", "--c", "1.2", "--N", "1e3", "--cache-dir", str(cache_dir))
    assert code == 2
    assert "c must lie" in err


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        hecke_sums.main(["verify", "nonsense"])
    assert info.value.code == 2


def test_count_parser_rejects_fractions(capsys):
    with pytest.raises(SystemExit):
        hecke_sums.main(["farey", "--N", "1.5e0"])
