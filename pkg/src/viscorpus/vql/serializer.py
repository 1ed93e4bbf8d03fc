"""Canonical printer for VQL ASTs.

Output is deterministic and single-space separated: keywords lowercase,
identifiers and literals rendered exactly as stored, string literals
single-quoted. By default no spaces are emitted inside parentheses
(``count(t.c)``); ``spaced_parens=True`` switches every parenthesis to
the spaced style (``count ( t.c )``).
"""

from __future__ import annotations

from .ast import (
    BetweenPredicate,
    BinSpec,
    BoolOp,
    ColumnRef,
    Comparison,
    InPredicate,
    Join,
    LikePredicate,
    Literal,
    OrderSpec,
    Predicate,
    SelectExpr,
    TableSource,
    ValueExpr,
    VqlQuery,
)


def serialize_vql(q: VqlQuery, spaced_parens: bool = False) -> str:
    """Render a query (or subquery) to its canonical text."""
    head = "" if q.chart is None else f"visualize {q.chart.kind} "
    select = ", ".join(render_select_expr(e, spaced_parens) for e in q.select)
    return f"{head}select {select} {render_data_clauses(q, spaced_parens)}"


def render_select_expr(e: SelectExpr, spaced_parens: bool = False) -> str:
    operand = _colref(e.operand)
    if e.aggregate is None:
        return operand
    return _call(e.aggregate, operand, spaced_parens)


def render_data_clauses(q: VqlQuery, spaced_parens: bool = False) -> str:
    """Render every clause after the select list: from/join/where/group/order/bin."""
    parts = [_source(q.source, spaced_parens)]
    if q.filter is not None:
        parts.append(f"where {_predicate(q.filter, spaced_parens)}")
    if q.group_by:
        parts.append("group by " + ", ".join(_colref(c) for c in q.group_by))
    if q.order is not None:
        parts.append(_order(q.order, spaced_parens))
    if q.bin is not None:
        parts.append(_bin(q.bin))
    return " ".join(parts)


def _call(name: str, inner: str, spaced: bool) -> str:
    return f"{name} ( {inner} )" if spaced else f"{name}({inner})"


def _group(inner: str, spaced: bool) -> str:
    return f"( {inner} )" if spaced else f"({inner})"


def _colref(c: ColumnRef) -> str:
    if c.wildcard:
        return "*"
    return f"{c.table}.{c.column}" if c.table else c.column


def _value(v: ValueExpr) -> str:
    if isinstance(v, Literal):
        return f"'{v.text}'" if v.quoted else v.text
    return _colref(v)


def _source(src: TableSource, spaced: bool) -> str:
    out = f"from {src.primary}"
    if src.primary_alias:
        out += f" as {src.primary_alias}"
    for join in src.joins:
        out += _join(join, spaced)
    return out


def _join(join: Join, spaced: bool) -> str:
    alias = f" as {join.alias}" if join.alias else ""
    return f" join {join.table}{alias} on {_predicate(join.condition, spaced)}"


def _order(order: OrderSpec, spaced: bool) -> str:
    out = f"order by {render_select_expr(order.key, spaced)}"
    if order.direction:
        out += f" {order.direction}"
    return out


def _bin(spec: BinSpec) -> str:
    return f"bin {_colref(spec.column)} by {spec.interval}"


def _predicate(p: Predicate, spaced: bool) -> str:
    if isinstance(p, Comparison):
        return f"{_value(p.left)} {p.op} {_value(p.right)}"
    if isinstance(p, LikePredicate):
        keyword = "not like" if p.negated else "like"
        return f"{_colref(p.column)} {keyword} {_value(p.pattern)}"
    if isinstance(p, BetweenPredicate):
        return f"{_colref(p.column)} between {_value(p.low)} and {_value(p.high)}"
    if isinstance(p, InPredicate):
        keyword = "not in" if p.negated else "in"
        if p.subquery is not None:
            inner = serialize_vql(p.subquery, spaced)
        else:
            inner = ", ".join(_value(v) for v in p.values or ())
        return f"{_colref(p.column)} {keyword} {_group(inner, spaced)}"
    if isinstance(p, BoolOp):
        rendered = []
        for child in p.operands:
            text = _predicate(child, spaced)
            # 'and' binds tighter than 'or': an or-node nested under an
            # and-node is the only case needing parentheses.
            if p.op == "and" and isinstance(child, BoolOp) and child.op == "or":
                text = _group(text, spaced)
            rendered.append(text)
        return f" {p.op} ".join(rendered)
    raise TypeError(f"not a predicate node: {p!r}")
