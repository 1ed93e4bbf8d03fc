"""Database schema model, n-gram filtration, linearization, normalization.

Filtration keeps the tables whose name (and, optionally, column name)
n-grams overlap the question's n-grams; retained tables keep all their
columns. Linearization renders ``| <db> | <table> : <table>.<col>, ...``
with table blocks separated by ``|``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EncodingDelimiterError

#: Characters reserved by the schema linearization format.
SCHEMA_DELIMITERS = ("|", ",", ":")


@dataclass(frozen=True)
class ColumnDef:
    name: str
    dtype: str | None = None


@dataclass(frozen=True)
class TableSchema:
    name: str
    columns: tuple[ColumnDef, ...]

    def __post_init__(self):
        if not self.columns:
            raise ValueError(f"table {self.name!r} has no columns")
        names = [c.name.lower() for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError(f"table {self.name!r} has duplicate column names")

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)


@dataclass(frozen=True)
class DatabaseSchema:
    db_name: str
    tables: tuple[TableSchema, ...]

    def __post_init__(self):
        names = [t.name.lower() for t in self.tables]
        if len(set(names)) != len(names):
            raise ValueError(f"database {self.db_name!r} has duplicate table names")

    def table(self, name: str) -> TableSchema:
        low = name.lower()
        for t in self.tables:
            if t.name.lower() == low:
                return t
        raise KeyError(name)


def tokenize_identifier(text: str) -> list[str]:
    """Lowercase and split on every non-alphanumeric run.

    Underscored identifiers split into their words, so multi-word table
    names can match question prose (``exhibition_record`` -> ``exhibition``,
    ``record``).
    """
    return [t for t in re.split(r"[^0-9a-z]+", text.lower()) if t]


def ngram_set(tokens: list[str], max_n: int) -> set[str]:
    grams: set[str] = set()
    for n in range(1, max_n + 1):
        for i in range(len(tokens) - n + 1):
            grams.add(" ".join(tokens[i : i + n]))
    return grams


def filter_schema(
    question: str,
    s: DatabaseSchema,
    max_n: int = 3,
    match_columns: bool = True,
) -> DatabaseSchema:
    """Keep the tables whose name n-grams overlap the question's n-grams.

    Column names participate when ``match_columns`` is set. Retained
    tables keep every column. If nothing matches (or the question is
    empty), the full schema is returned so no information is lost.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    question_grams = ngram_set(tokenize_identifier(question), max_n)
    if not question_grams:
        return s
    kept = []
    for table in s.tables:
        names = [table.name]
        if match_columns:
            names.extend(c.name for c in table.columns)
        if any(ngram_set(tokenize_identifier(n), max_n) & question_grams for n in names):
            kept.append(table)
    if not kept:
        return s
    return DatabaseSchema(db_name=s.db_name, tables=tuple(kept))


def encode_schema(s: DatabaseSchema) -> str:
    """Linearize a schema: ``| <db> | <t> : <t>.<c1>, <t>.<c2> | ...``."""
    for name in _all_names(s):
        for delim in SCHEMA_DELIMITERS:
            if delim in name:
                raise EncodingDelimiterError(
                    f"name {name!r} contains reserved delimiter {delim!r}"
                )
    blocks = [s.db_name]
    for table in s.tables:
        columns = ", ".join(f"{table.name}.{c.name}" for c in table.columns)
        blocks.append(f"{table.name} : {columns}")
    return "| " + " | ".join(blocks)


def normalize_schema(s: DatabaseSchema) -> DatabaseSchema:
    """Lowercase every database, table, and column name. Idempotent."""
    return DatabaseSchema(
        db_name=s.db_name.lower(),
        tables=tuple(
            TableSchema(
                name=t.name.lower(),
                columns=tuple(ColumnDef(name=c.name.lower(), dtype=c.dtype) for c in t.columns),
            )
            for t in s.tables
        ),
    )


def _all_names(s: DatabaseSchema):
    yield s.db_name
    for table in s.tables:
        yield table.name
        for column in table.columns:
            yield column.name
