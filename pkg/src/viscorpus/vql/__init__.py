"""VQL: grammar, parser, canonical serializer, normalizer, decomposition."""

from .ast import (
    AGGREGATES,
    DEFAULT_CHART_KINDS,
    BetweenPredicate,
    BinSpec,
    BoolOp,
    ChartType,
    ColumnRef,
    Comparison,
    InPredicate,
    Join,
    LikePredicate,
    Literal,
    OrderSpec,
    Predicate,
    QueryComponents,
    SelectExpr,
    TableSource,
    ValueExpr,
    VqlQuery,
    has_joins,
)
from .normalize import decompose, normalize_vql
from .parser import parse_vql
from .serializer import render_data_clauses, render_select_expr, serialize_vql

__all__ = [
    "AGGREGATES",
    "DEFAULT_CHART_KINDS",
    "BetweenPredicate",
    "BinSpec",
    "BoolOp",
    "ChartType",
    "ColumnRef",
    "Comparison",
    "InPredicate",
    "Join",
    "LikePredicate",
    "Literal",
    "OrderSpec",
    "Predicate",
    "QueryComponents",
    "SelectExpr",
    "TableSource",
    "ValueExpr",
    "VqlQuery",
    "decompose",
    "has_joins",
    "normalize_vql",
    "parse_vql",
    "render_data_clauses",
    "render_select_expr",
    "serialize_vql",
]
