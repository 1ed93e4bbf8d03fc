"""Exception hierarchy for the toolkit.

Every error raised by the library derives from VisCorpusError so the CLI
can map exception classes to exit codes.
"""

from __future__ import annotations


class VisCorpusError(Exception):
    """Base class for all toolkit errors."""


class VqlSyntaxError(VisCorpusError):
    """Malformed query text.

    Carries the byte offset of the offending token and the set of token
    kinds the parser would have accepted there.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at byte offset {offset}"
        if expected:
            detail += f" (expected one of: {', '.join(sorted(expected))})"
        super().__init__(detail)


class UnknownChartTypeError(VqlSyntaxError):
    """Chart keyword not in the configured chart-kind set."""

    def __init__(self, found: str, offset: int, supported: tuple[str, ...]):
        self.found = found
        self.supported = supported
        super().__init__(
            f"unknown chart type {found!r}; supported kinds: {', '.join(supported)}",
            offset,
        )


class NormalizationError(VisCorpusError):
    """Query cannot be normalized against the given schema."""


class AmbiguousColumnError(NormalizationError):
    def __init__(self, column: str, tables: list[str]):
        self.column = column
        self.tables = tables
        super().__init__(
            f"column {column!r} is ambiguous: present in tables {', '.join(sorted(tables))}"
        )


class UnknownColumnError(NormalizationError):
    def __init__(self, column: str, searched: list[str]):
        self.column = column
        self.searched = searched
        super().__init__(
            f"column {column!r} not found in any source table ({', '.join(searched) or 'none'})"
        )


class UnknownTableError(NormalizationError):
    def __init__(self, table: str, db_name: str = ""):
        self.table = table
        super().__init__(
            f"table {table!r} not found" + (f" in database {db_name!r}" if db_name else "")
        )


class EncodingDelimiterError(VisCorpusError):
    """A name or cell contains a character reserved by a linearization format."""


class FormatViolationError(VisCorpusError):
    """A data file does not match its documented layout."""

    def __init__(self, message: str, path: str = "", line: int = 0):
        self.path = path
        self.line = line
        where = f"{path}:{line}: " if path and line else ""
        super().__init__(f"{where}{message}")


class DuplicateIdError(FormatViolationError):
    def __init__(self, record_id, path: str = "", line: int = 0):
        self.record_id = record_id
        super().__init__(f"duplicate record id {record_id!r}", path, line)


class MissingSchemaError(VisCorpusError):
    """A record references a database for which no schema was supplied."""

    def __init__(self, db_id: str, record_id=None):
        self.db_id = db_id
        self.record_id = record_id
        msg = f"no schema for database {db_id!r}"
        if record_id is not None:
            msg += f" (required by record {record_id!r})"
        super().__init__(msg)


class SpecialTokenCollisionError(VisCorpusError):
    """Corpus text contains one of the reserved angle-bracket tokens."""


class CorruptionError(VisCorpusError):
    """Span corruption cannot be applied (e.g. sequence too short)."""
