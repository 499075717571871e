"""CSV and JSON serialisation of sweep rows.

Floats are written with ``repr`` (shortest round-trip decimal), missing
values as empty CSV fields / JSON ``null``, and flags joined with ``;``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import astuple

from .sweep import COLUMNS, ResultRow

FLAG_SEP = ";"


def _cell(name, value) -> str:
    if value is None:
        return ""
    if name == "flags":
        return FLAG_SEP.join(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def row_to_dict(row: ResultRow) -> dict:
    d = dict(zip(COLUMNS, astuple(row)))
    d["flags"] = FLAG_SEP.join(row.flags)
    return d


def emit(rows, fmt: str = "csv") -> str:
    """Render rows as CSV (header always present) or a JSON array."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in rows:
            w.writerow([_cell(n, v) for n, v in zip(COLUMNS, astuple(row))])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([row_to_dict(r) for r in rows], allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _from_cells(cells: dict) -> ResultRow:
    kw = {}
    for name in COLUMNS:
        v = cells.get(name)
        if name == "index":
            kw[name] = int(v)
        elif name == "segment":
            kw[name] = "" if v is None else str(v)
        elif name == "flags":
            kw[name] = tuple(v.split(FLAG_SEP)) if v else ()
        elif v is None or v == "":
            kw[name] = None
        else:
            kw[name] = float(v)
    return ResultRow(**kw)


def parse(text: str, fmt: str = "csv") -> list:
    """Inverse of :func:`emit`."""
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError("CSV header does not match the row schema")
        return [_from_cells(r) for r in reader]
    if fmt == "json":
        return [_from_cells(r) for r in json.loads(text)]
    raise ValueError(f"unknown format {fmt!r}")
