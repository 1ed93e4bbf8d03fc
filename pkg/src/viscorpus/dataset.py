"""Ingestion, pre-processing, cross-domain partitioning, and statistics.

Record layouts (UTF-8 JSON lines, one record per line; ``split`` is an
optional published-split field on every kind):

* text2vis:  ``{"id", "db_id", "question", "vql"}``
* visqa:     ``{"id", "db_id", "question", "answer", "vql", "qtype"}``
  plus an optional ``"table": {"headers": [...], "rows": [[...]]}``
  carrying the chart's data table when the export provides one
* tabletext: ``{"id", "source", "headers": [...], "rows": [[...]],
  "description"}`` with source in {chart2text, wikitabletext}
* schemas:   ``{"db_id", "tables": [{"name", "columns": [...]}]}``,
  one database per line (a single whole-file JSON object or array is
  also accepted)
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .errors import DuplicateIdError, FormatViolationError
from .jsonl import dump_jsonl, iter_jsonl
from .schema import ColumnDef, DatabaseSchema, TableSchema
from .table import DataTable, passes_cell_filter
from .vql import has_joins, parse_vql

KINDS = ("text2vis", "visqa", "tabletext")
SPLITS = ("train", "valid", "test")

_CJK_RANGES = (
    (0x3400, 0x4DBF),  # CJK Unified Ideographs Extension A
    (0x4E00, 0x9FFF),  # CJK Unified Ideographs
    (0xF900, 0xFAFF),  # CJK Compatibility Ideographs
    (0x20000, 0x2EBEF),  # Extensions B..F
    (0x30000, 0x3134A),  # Extension G
)


def contains_cjk(text: str) -> bool:
    return any(lo <= ord(ch) <= hi for ch in text for lo, hi in _CJK_RANGES)


@dataclass(frozen=True)
class Text2VisRecord:
    id: str | int
    db_id: str
    question: str
    vql: str
    split: str | None = None

    @cached_property
    def has_join(self) -> bool:
        return has_joins(parse_vql(self.vql))


@dataclass(frozen=True)
class VisQARecord:
    id: str | int
    db_id: str
    question: str
    answer: str
    vql: str
    question_type: int
    table: DataTable | None = None
    split: str | None = None

    def __post_init__(self):
        if self.question_type not in (1, 2, 3):
            raise ValueError(f"question_type must be 1, 2, or 3, got {self.question_type}")


@dataclass(frozen=True)
class TableTextRecord:
    id: str | int
    source: str
    table: DataTable
    description: str
    split: str | None = None

    def __post_init__(self):
        if self.source not in ("chart2text", "wikitabletext"):
            raise ValueError(f"unknown table-text source {self.source!r}")


Record = Text2VisRecord | VisQARecord | TableTextRecord


@dataclass(frozen=True)
class Reject:
    line: int
    reason: str


@dataclass
class LoadResult:
    records: list
    rejects: list[Reject] = field(default_factory=list)


def load_dataset(path: str | Path, kind: str, strict: bool = False) -> LoadResult:
    """Load a JSON-lines dataset file.

    Malformed records are collected into the rejects report with their
    line numbers (or raised immediately when ``strict``); a duplicate id
    is always an error.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown dataset kind {kind!r}; expected one of {KINDS}")
    records: list = []
    rejects: list[Reject] = []
    seen_ids: dict = {}
    for line_no, obj in _iter_lenient(path, strict, rejects):
        try:
            record = record_from_dict(obj, kind)
        except (KeyError, TypeError, ValueError) as exc:
            if strict:
                raise FormatViolationError(str(exc), str(path), line_no) from exc
            rejects.append(Reject(line_no, str(exc)))
            continue
        if record.id in seen_ids:
            raise DuplicateIdError(record.id, str(path), line_no)
        seen_ids[record.id] = line_no
        records.append(record)
    return LoadResult(records=records, rejects=rejects)


def _iter_lenient(path, strict: bool, rejects: list[Reject]):
    if strict:
        yield from iter_jsonl(path)
        return
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                obj = json.loads(stripped)
                if not isinstance(obj, dict):
                    raise ValueError("line is not a JSON object")
            except ValueError as exc:
                rejects.append(Reject(line_no, f"invalid JSON: {exc}"))
                continue
            yield line_no, obj


def record_from_dict(obj: dict, kind: str) -> Record:
    split = obj.get("split")
    if split is not None and split not in SPLITS:
        raise ValueError(f"split must be one of {SPLITS}, got {split!r}")
    if kind == "text2vis":
        return Text2VisRecord(
            id=_require(obj, "id", (str, int)),
            db_id=_require(obj, "db_id", str),
            question=_require(obj, "question", str),
            vql=_require(obj, "vql", str),
            split=split,
        )
    if kind == "visqa":
        table = None
        if obj.get("table") is not None:
            table = _table_from_dict(obj["table"])
        return VisQARecord(
            id=_require(obj, "id", (str, int)),
            db_id=_require(obj, "db_id", str),
            question=_require(obj, "question", str),
            answer=_require(obj, "answer", str),
            vql=_require(obj, "vql", str),
            question_type=_require(obj, "qtype", int),
            table=table,
            split=split,
        )
    return TableTextRecord(
        id=_require(obj, "id", (str, int)),
        source=_require(obj, "source", str),
        table=_table_from_dict(obj),
        description=_require(obj, "description", str),
        split=split,
    )


def record_to_dict(record: Record) -> dict:
    if isinstance(record, Text2VisRecord):
        out = {"id": record.id, "db_id": record.db_id, "question": record.question, "vql": record.vql}
    elif isinstance(record, VisQARecord):
        out = {
            "id": record.id,
            "db_id": record.db_id,
            "question": record.question,
            "answer": record.answer,
            "vql": record.vql,
            "qtype": record.question_type,
        }
        if record.table is not None:
            out["table"] = {
                "headers": list(record.table.headers),
                "rows": [list(r) for r in record.table.rows],
            }
    elif isinstance(record, TableTextRecord):
        out = {
            "id": record.id,
            "source": record.source,
            "headers": list(record.table.headers),
            "rows": [list(r) for r in record.table.rows],
            "description": record.description,
        }
    else:
        raise TypeError(f"not a record: {record!r}")
    if record.split is not None:
        out["split"] = record.split
    return out


def write_dataset(records: list, path: str | Path) -> int:
    return dump_jsonl(path, (record_to_dict(r) for r in records))


def _table_from_dict(obj: dict) -> DataTable:
    headers = _require(obj, "headers", list)
    rows = _require(obj, "rows", list)
    if not all(isinstance(h, str) for h in headers):
        raise ValueError("headers must be strings")
    cells = []
    for row in rows:
        if not isinstance(row, list):
            raise ValueError("rows must be lists of cells")
        cells.append(tuple(str(c) if not isinstance(c, str) else c for c in row))
    return DataTable(headers=tuple(headers), rows=tuple(cells), owner=obj.get("owner"))


def _require(obj: dict, key: str, types) -> object:
    if key not in obj:
        raise KeyError(f"missing field {key!r}")
    value = obj[key]
    if not isinstance(value, types) or isinstance(value, bool):
        raise ValueError(f"field {key!r} has wrong type {type(value).__name__}")
    return value


def load_schemas(path: str | Path) -> dict[str, DatabaseSchema]:
    """Load database schemas keyed by db_id.

    Accepts JSON-lines (one database per line) or a whole-file JSON
    object/array of the same shape.
    """
    text = Path(path).read_text(encoding="utf-8")
    objs: list[dict]
    try:
        whole = json.loads(text)
        objs = whole if isinstance(whole, list) else [whole]
    except json.JSONDecodeError:
        objs = [obj for _, obj in iter_jsonl(path)]
    out: dict[str, DatabaseSchema] = {}
    for obj in objs:
        schema = schema_from_dict(obj)
        if schema.db_name in out:
            raise DuplicateIdError(schema.db_name, str(path))
        out[schema.db_name] = schema
    return out


def schema_from_dict(obj: dict) -> DatabaseSchema:
    db_id = _require(obj, "db_id", str)
    tables = []
    for t in _require(obj, "tables", list):
        name = _require(t, "name", str)
        columns = tuple(ColumnDef(name=c) for c in _require(t, "columns", list))
        tables.append(TableSchema(name=name, columns=columns))
    return DatabaseSchema(db_name=db_id, tables=tuple(tables))


def schema_to_dict(schema: DatabaseSchema) -> dict:
    return {
        "db_id": schema.db_name,
        "tables": [
            {"name": t.name, "columns": [c.name for c in t.columns]} for t in schema.tables
        ],
    }


# -- pre-processing -----------------------------------------------------


@dataclass(frozen=True)
class Dropped:
    record: Record
    reason: str


@dataclass
class PreprocessResult:
    kept: list
    dropped: list[Dropped] = field(default_factory=list)


def preprocess(records: list, cell_limit: int = 150) -> PreprocessResult:
    """Drop incomplete records, Chinese-question records, and oversized
    chart-derived tables. Idempotent over its own kept output."""
    kept: list = []
    dropped: list[Dropped] = []
    for record in records:
        reason = _drop_reason(record, cell_limit)
        if reason is None:
            kept.append(record)
        else:
            dropped.append(Dropped(record, reason))
    return PreprocessResult(kept=kept, dropped=dropped)


def _drop_reason(record: Record, cell_limit: int) -> str | None:
    if isinstance(record, Text2VisRecord):
        if not record.question.strip() or not record.vql.strip():
            return "incomplete"
        if contains_cjk(record.question):
            return "cjk"
        return None
    if isinstance(record, VisQARecord):
        if not record.question.strip() or not record.vql.strip() or not record.answer.strip():
            return "incomplete"
        if contains_cjk(record.question):
            return "cjk"
        return None
    if isinstance(record, TableTextRecord):
        if not record.description.strip():
            return "incomplete"
        if record.source == "chart2text" and not passes_cell_filter(record.table, cell_limit):
            return "cell-limit"
        return None
    raise TypeError(f"not a record: {record!r}")


# -- partitioning --------------------------------------------------------


@dataclass(frozen=True)
class SplitAssignment:
    """Key -> split mapping at database granularity (record id for
    database-less kinds). Each key is assigned exactly once."""

    assignment: dict

    def of(self, key) -> str:
        return self.assignment[key]

    def keys_for(self, split: str) -> list:
        return [k for k, s in self.assignment.items() if s == split]

    def to_dict(self) -> dict:
        return {str(k): v for k, v in self.assignment.items()}


def partition_key(record: Record):
    return record.db_id if isinstance(record, (Text2VisRecord, VisQARecord)) else record.id


def partition_by_database(
    records: list,
    ratios: tuple[float, float, float] = (0.7, 0.1, 0.2),
    seed: int = 0,
) -> SplitAssignment:
    """Assign whole databases to train/valid/test, approaching the target
    instance-count ratios greedily.

    Databases are shuffled with the seed, then each is assigned to the
    split with the largest remaining instance-count deficit (ties broken
    in train/valid/test order). No database ever spans two splits.
    """
    if len(ratios) != 3:
        raise ValueError("ratios must be a (train, valid, test) triple")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {sum(ratios)}")
    sizes = Counter(partition_key(r) for r in records)
    if len(sizes) < 3:
        raise ValueError(f"need at least 3 databases to partition, got {len(sizes)}")
    keys = sorted(sizes, key=str)
    random.Random(seed).shuffle(keys)
    total = sum(sizes.values())
    targets = [r * total for r in ratios]
    assigned = [0, 0, 0]
    assignment: dict = {}
    for key in keys:
        best = max(range(3), key=lambda i: targets[i] - assigned[i])
        assignment[key] = SPLITS[best]
        assigned[best] += sizes[key]
    return SplitAssignment(assignment=assignment)


def published_splits(records: list) -> SplitAssignment | None:
    """Build the assignment from the records' own split fields.

    Returns None unless every record carries one. A database appearing in
    two splits violates the cross-domain contract and is an error.
    """
    if not records or any(r.split is None for r in records):
        return None
    assignment: dict = {}
    for record in records:
        key = partition_key(record)
        if key in assignment and assignment[key] != record.split:
            raise FormatViolationError(
                f"database {key!r} is published in both "
                f"{assignment[key]!r} and {record.split!r}"
            )
        assignment[key] = record.split
    return SplitAssignment(assignment=assignment)


# -- statistics ----------------------------------------------------------


def stats(records: list, assignment: SplitAssignment | None = None) -> dict:
    """Counts per join-status / question-type / cell-bucket, optionally
    broken down per split."""
    if not records:
        return {"kind": None, "total": 0}
    kinds = {type(r) for r in records}
    if len(kinds) > 1:
        raise ValueError("stats requires records of a single kind")
    if isinstance(records[0], Text2VisRecord):
        report = _text2vis_stats(records)
        grouper = _text2vis_stats
    elif isinstance(records[0], VisQARecord):
        report = _visqa_stats(records)
        grouper = _visqa_stats
    else:
        report = _tabletext_stats(records)
        grouper = _tabletext_stats
    if assignment is not None:
        report["splits"] = {
            split: grouper([r for r in records if assignment.of(partition_key(r)) == split])
            for split in SPLITS
        }
    return report


def _text2vis_stats(records: list) -> dict:
    with_join = sum(1 for r in records if r.has_join)
    return {
        "kind": "text2vis",
        "total": len(records),
        "with_join": with_join,
        "without_join": len(records) - with_join,
        "databases": len({r.db_id for r in records}),
        "databases_without_join": len({r.db_id for r in records if not r.has_join}),
    }


def _visqa_stats(records: list) -> dict:
    by_type = Counter(r.question_type for r in records)
    return {
        "kind": "visqa",
        "total": len(records),
        "by_type": {str(t): by_type.get(t, 0) for t in (1, 2, 3)},
        "distinct_queries": len({r.vql for r in records}),
        "databases": len({r.db_id for r in records}),
    }


def _tabletext_stats(records: list) -> dict:
    from .table import cell_count

    counts = [cell_count(r.table) for r in records]
    by_source = Counter(r.source for r in records)
    return {
        "kind": "tabletext",
        "total": len(records),
        "by_source": dict(sorted(by_source.items())),
        "cells": {
            "min": min(counts) if counts else 0,
            "max": max(counts) if counts else 0,
            "within_150": sum(1 for c in counts if c <= 150),
            "above_150": sum(1 for c in counts if c > 150),
        },
    }
