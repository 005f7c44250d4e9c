#!/usr/bin/env python3
"""
CSV / JSON writers shared by the CLI and the verification suites.

Every body starts with the run configuration and library versions so a
table can be traced back to the command that produced it.
"""

import csv
import json
import sys
from io import StringIO
from typing import Any, Dict, List, Optional, Sequence

import mpmath
import numpy as np

import config


def versions() -> Dict[str, str]:
    return {
        "hecke_sums": config.VERSION,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "mpmath": mpmath.__version__,
    }


def _plain(value: Any) -> Any:
    """numpy scalars to Python; None stays None."""
    if isinstance(value, np.generic):
        return value.item()
    return value


def _csv_cell(value: Any) -> str:
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_results(rows: Sequence[Dict], fmt: str = "csv", header: Optional[Dict] = None,
                   columns: Optional[List[str]] = None) -> str:
    header = dict(header or {})
    rows = [{k: _plain(v) for k, v in row.items()} for row in rows]
    if fmt == "json":
        body = {"schema": config.SCHEMA_VERSION, "config": header, "versions": versions(), "rows": rows}
        return json.dumps(body, indent=2, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")

    buffer = StringIO()
    for key, value in header.items():
        buffer.write(f"# {key}: {_csv_cell(value)}\n")
    for key, value in versions().items():
        buffer.write(f"# version.{key}: {value}\n")
    fieldnames = columns or (list(rows[0].keys()) if rows else [])
    if fieldnames:
        writer = csv.DictWriter(buffer, fieldnames=fieldnames, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in fieldnames})
    return buffer.getvalue()


def output_results(rows: Sequence[Dict], fmt: str = "csv", output_file: Optional[str] = None,
                   header: Optional[Dict] = None, columns: Optional[List[str]] = None) -> None:
    """Write the table to output_file, or stdout when none is given."""
    output = format_results(rows, fmt, header, columns)
    if output_file:
        with open(output_file, "w", newline="") as f:
            f.write(output)
    else:
        sys.stdout.write(output)


if __name__ == "__main__":
    output_results([{"N": 10_000, "value_re": 0.25, "bound_ratio": None}],
                   header={"subcommand": "demo"})
