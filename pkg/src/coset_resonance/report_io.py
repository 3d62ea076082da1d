"""Tabular output: versioned CSV and JSON with lossless doubles.

Both formats carry the same records. Missing values are an empty CSV field
and ``null`` in JSON; floats are written with 17 significant digits so a
read-back reproduces every double exactly.
"""
import csv
import io
import json
import math
import re

__all__ = ["FORMAT_TAG", "SCAN_COLUMNS", "emit", "parse", "format_value", "parse_value"]

FORMAT_TAG = "coset-resonance-lab v1"

SCAN_COLUMNS = (
    "q", "g", "K", "c", "parity_profile", "N", "X", "delta", "M1", "ReM2", "MT",
    "err1", "err2", "err3", "err4", "err5", "lower_bound", "max_abs_L",
    "argmax_character_index", "theorem_exponent", "measured_log_max",
)

_INT = re.compile(r"[+-]?\d+\Z")


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):  # numpy scalars
        return _clean(v.item())
    return v


def format_value(v):
    v = _clean(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def parse_value(text):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if _INT.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def emit(rows, columns, fmt="csv"):
    """Serialize ``rows`` (dicts) restricted to ``columns`` to a string."""
    columns = list(columns)
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# {FORMAT_TAG}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_value(row.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        records = [{c: _clean(row.get(c)) for c in columns} for row in rows]
        doc = {"format": FORMAT_TAG, "columns": columns, "rows": records}
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse(text, fmt="csv"):
    """Inverse of :func:`emit`: returns (columns, rows)."""
    if fmt == "json":
        doc = json.loads(text)
        if doc.get("format") != FORMAT_TAG:
            raise ValueError(f"unrecognized report format {doc.get('format')!r}")
        return list(doc["columns"]), [dict(r) for r in doc["rows"]]
    if fmt == "csv":
        lines = text.splitlines()
        if not lines or lines[0] != f"# {FORMAT_TAG}":
            raise ValueError("missing report version header")
        reader = csv.reader(lines[1:])
        columns = next(reader)
        rows = [{c: parse_value(v) for c, v in zip(columns, rec)} for rec in reader]
        return columns, rows
    raise ValueError(f"unknown format {fmt!r}")
