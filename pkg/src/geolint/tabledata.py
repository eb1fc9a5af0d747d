"""Attribute table reading (CSV with a header row)."""
from __future__ import annotations

import csv
import io

from .errors import InputError


def read_table_text(text: str) -> list[dict]:
    """Parse CSV text into row dicts; values stay strings for later coercion."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise InputError("attribute table is empty")
    if any(name is None or name == "" for name in reader.fieldnames):
        raise InputError("attribute table has unnamed columns")
    rows = [dict(row) for row in reader]
    if not rows:
        raise InputError("attribute table has a header but no rows")
    return rows


def read_table_file(path: str) -> list[dict]:
    try:
        with open(path, encoding="utf-8-sig") as f:
            return read_table_text(f.read())
    except OSError as exc:
        raise InputError(f"cannot read table {path!r}: {exc}") from exc
