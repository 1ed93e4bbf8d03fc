"""Tabular data model: linearization, cell-count filtering, header normalization."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EncodingDelimiterError

#: Inclusive cell-count bound applied to chart-derived tables.
DEFAULT_CELL_LIMIT = 150

_CALL_RE = re.compile(r"^(\w+)\((.*)\)$")


@dataclass(frozen=True)
class DataTable:
    headers: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    owner: str | None = None  # table name used to prefix headers, when known

    def __post_init__(self):
        if not self.headers:
            raise ValueError("table needs at least one column")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.headers):
                raise ValueError(
                    f"row {i + 1} has {len(row)} cells, expected {len(self.headers)}"
                )


def encode_table(t: DataTable) -> str:
    """Linearize: ``col : h1 | h2 row 1 : v11 | v12 row 2 : ...``."""
    for value in list(t.headers) + [c for row in t.rows for c in row]:
        if "|" in value:
            raise EncodingDelimiterError(f"cell {value!r} contains reserved delimiter '|'")
    parts = ["col : " + " | ".join(t.headers)]
    for i, row in enumerate(t.rows, start=1):
        parts.append(f"row {i} : " + " | ".join(row))
    return " ".join(parts)


def cell_count(t: DataTable) -> int:
    return len(t.rows) * len(t.headers)


def passes_cell_filter(t: DataTable, threshold: int = DEFAULT_CELL_LIMIT) -> bool:
    return cell_count(t) <= threshold


def normalize_table(t: DataTable) -> DataTable:
    """Lowercase headers and prefix them with the owning table when known.

    Cell values are preserved verbatim; row and column counts never
    change. Idempotent: already-prefixed headers (dotted names, also
    inside aggregate-call headers like ``count(artist.country)``) are
    left alone.
    """
    owner = t.owner.lower() if t.owner else None
    headers = tuple(_normalize_header(h, owner) for h in t.headers)
    return DataTable(headers=headers, rows=t.rows, owner=t.owner)


def _normalize_header(header: str, owner: str | None) -> str:
    low = header.lower()
    call = _CALL_RE.match(low)
    if call:
        inner = call.group(2)
        if owner and inner and "." not in inner:
            inner = f"{owner}.{inner}"
        return f"{call.group(1)}({inner})"
    if owner and "." not in low:
        return f"{owner}.{low}"
    return low
