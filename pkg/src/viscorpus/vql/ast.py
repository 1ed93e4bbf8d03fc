"""AST node types for the visualization query language (VQL).

A VQL query is a SQL-like select statement with a leading ``visualize
<chart>`` clause, optional joins, predicates (including in/not-in
subqueries), grouping, ordering, and a trailing ``bin ... by ...`` clause.
All nodes are frozen dataclasses: parsing, serialization, and
normalization are pure functions over immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

#: Chart kinds accepted by default. Extensible: parse_vql takes a
#: ``chart_kinds`` override for dataset dialects with extra kinds.
DEFAULT_CHART_KINDS: tuple[str, ...] = (
    "bar",
    "pie",
    "line",
    "scatter",
    "stacked bar",
    "grouping line",
    "grouping scatter",
)

AGGREGATES: tuple[str, ...] = ("count", "sum", "avg", "max", "min")

COMPARISON_OPS: tuple[str, ...] = ("=", "!=", "<>", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class ChartType:
    """A visualization kind, stored lowercase."""

    kind: str

    def __post_init__(self):
        object.__setattr__(self, "kind", self.kind.lower())


@dataclass(frozen=True)
class ColumnRef:
    """Reference to a column, optionally table-qualified; ``*`` when wildcard."""

    column: str = ""
    table: str = ""
    wildcard: bool = False

    def __post_init__(self):
        if self.wildcard and (self.column or self.table):
            raise ValueError("wildcard column reference must carry no names")


@dataclass(frozen=True)
class Literal:
    """A literal value. ``quoted`` distinguishes string literals from numbers."""

    text: str
    quoted: bool = False


#: Value position in a predicate: a column reference or a literal.
ValueExpr = ColumnRef | Literal


@dataclass(frozen=True)
class SelectExpr:
    """One select-list entry: a column, optionally wrapped in an aggregate."""

    operand: ColumnRef
    aggregate: str | None = None


@dataclass(frozen=True)
class Comparison:
    left: ValueExpr
    op: str
    right: ValueExpr


@dataclass(frozen=True)
class LikePredicate:
    column: ColumnRef
    pattern: Literal
    negated: bool = False


@dataclass(frozen=True)
class BetweenPredicate:
    column: ColumnRef
    low: ValueExpr
    high: ValueExpr


@dataclass(frozen=True)
class InPredicate:
    """``col [not] in (...)`` with either a literal list or a subquery."""

    column: ColumnRef
    values: tuple[ValueExpr, ...] | None = None
    subquery: "VqlQuery | None" = None
    negated: bool = False

    def __post_init__(self):
        if (self.values is None) == (self.subquery is None):
            raise ValueError("in-predicate needs exactly one of values or subquery")


@dataclass(frozen=True)
class BoolOp:
    """N-ary and/or over predicates; same-op children are kept flattened."""

    op: str  # "and" | "or"
    operands: tuple["Predicate", ...]

    def __post_init__(self):
        if self.op not in ("and", "or"):
            raise ValueError(f"bad boolean op {self.op!r}")
        if len(self.operands) < 2:
            raise ValueError("boolean op needs at least two operands")


Predicate = Comparison | LikePredicate | BetweenPredicate | InPredicate | BoolOp


@dataclass(frozen=True)
class Join:
    table: str
    condition: Predicate
    alias: str | None = None


@dataclass(frozen=True)
class TableSource:
    """From-clause: a primary table plus zero or more joins.

    Aliases are kept per occurrence while parsing and dropped by
    normalization; ``alias_map`` is the derived alias -> table view.
    """

    primary: str
    primary_alias: str | None = None
    joins: tuple[Join, ...] = ()

    @property
    def alias_map(self) -> dict[str, str]:
        out: dict[str, str] = {}
        if self.primary_alias:
            out[self.primary_alias.lower()] = self.primary
        for j in self.joins:
            if j.alias:
                out[j.alias.lower()] = j.table
        return out

    @property
    def tables(self) -> tuple[str, ...]:
        return (self.primary,) + tuple(j.table for j in self.joins)


@dataclass(frozen=True)
class OrderSpec:
    key: SelectExpr
    direction: str | None = None  # "asc" | "desc"; None until normalized


@dataclass(frozen=True)
class BinSpec:
    column: ColumnRef
    interval: str


@dataclass(frozen=True)
class VqlQuery:
    """A query, or a subquery when ``chart`` is None."""

    chart: ChartType | None
    select: tuple[SelectExpr, ...]
    source: TableSource
    filter: Predicate | None = None
    group_by: tuple[ColumnRef, ...] = ()
    order: OrderSpec | None = None
    bin: BinSpec | None = None

    def __post_init__(self):
        if not self.select:
            raise ValueError("select list must be non-empty")

    @property
    def is_subquery(self) -> bool:
        return self.chart is None


@dataclass(frozen=True)
class QueryComponents:
    """The three scored facets of a query: chart kind, axes, data operations."""

    vis: str
    axis: tuple[str, ...]
    data: str


def with_replaced(node, **changes):
    """dataclasses.replace, re-exported for callers transforming ASTs."""
    return replace(node, **changes)


def has_joins(q: VqlQuery) -> bool:
    """True if the query joins tables anywhere, subqueries included."""
    if q.source.joins:
        return True
    if q.filter is None:
        return False
    return any(has_joins(sub) for sub in _iter_subqueries(q.filter))


def _iter_subqueries(p: Predicate):
    if isinstance(p, InPredicate) and p.subquery is not None:
        yield p.subquery
    elif isinstance(p, BoolOp):
        for child in p.operands:
            yield from _iter_subqueries(child)
