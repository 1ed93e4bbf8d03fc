"""Query standardization and component decomposition.

normalize_vql applies, in order:

1. table-prefixing of every column reference, with ``count(*)`` rewritten
   to ``count(t.col)`` (replacement column: first group-by column owned by
   the primary table, else first non-aggregate selected column, else the
   primary table's first schema column);
2. single-quoting of string literals and canonical whitespace (both owned
   by the serializer);
3. explicit ``asc`` on an order clause without a direction;
4. removal of ``as`` aliases, with every alias occurrence replaced by the
   real table name, including join conditions and subqueries;
5. lowercasing of identifiers, keywords, and string literals.

The result is idempotent under re-normalization. Bare column names that
exist in more than one source table are a hard error, as are names that
resolve to no table.
"""

from __future__ import annotations

from ..errors import (
    AmbiguousColumnError,
    NormalizationError,
    UnknownColumnError,
    UnknownTableError,
)
from ..schema import DatabaseSchema
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
    QueryComponents,
    SelectExpr,
    TableSource,
    ValueExpr,
    VqlQuery,
)
from .serializer import render_data_clauses, render_select_expr

_CANONICAL_OPS = {"<>": "!="}


def normalize_vql(q: VqlQuery, s: DatabaseSchema) -> VqlQuery:
    """Standardize a parsed query against its database schema."""
    return _Normalizer(s).normalize_level(q, {}, ())


def decompose(q: VqlQuery) -> QueryComponents:
    """Split a (normalized) query into chart-kind, axis, and data components.

    Concatenating ``visualize <vis> select <axis, ...> <data>`` re-parses
    to the input AST.
    """
    if q.chart is None:
        raise ValueError("cannot decompose a subquery")
    return QueryComponents(
        vis=q.chart.kind,
        axis=tuple(render_select_expr(e) for e in q.select),
        data=render_data_clauses(q),
    )


class _Normalizer:
    def __init__(self, schema: DatabaseSchema):
        self.schema = schema
        self.columns = {
            t.name.lower(): [c.name.lower() for c in t.columns] for t in schema.tables
        }

    def normalize_level(
        self,
        q: VqlQuery,
        outer_aliases: dict[str, str],
        outer_scopes: tuple[tuple[str, ...], ...],
    ) -> VqlQuery:
        aliases = dict(outer_aliases)
        aliases.update({a: t.lower() for a, t in q.source.alias_map.items()})

        source = self._resolve_source(q.source, aliases, outer_scopes)
        frame = tuple(dict.fromkeys(source.tables))
        scopes = (frame,) + outer_scopes

        # Join conditions live in this level's scope.
        source = TableSource(
            primary=source.primary,
            joins=tuple(
                Join(table=j.table, condition=self._predicate(j.condition, aliases, scopes))
                for j in source.joins
            ),
        )

        group_by = tuple(self._colref(c, aliases, scopes) for c in q.group_by)

        replacement: ColumnRef | None = None

        def count_star_replacement() -> ColumnRef:
            nonlocal replacement
            if replacement is None:
                replacement = self._pick_replacement(source.primary, group_by, q, aliases, scopes)
            return replacement

        select = tuple(
            self._select_expr(e, aliases, scopes, count_star_replacement) for e in q.select
        )

        filter_pred = (
            self._predicate(q.filter, aliases, scopes) if q.filter is not None else None
        )

        order = None
        if q.order is not None:
            key = self._select_expr(q.order.key, aliases, scopes, count_star_replacement)
            order = OrderSpec(key=key, direction=q.order.direction or "asc")

        bin_spec = None
        if q.bin is not None:
            bin_spec = BinSpec(
                column=self._colref(q.bin.column, aliases, scopes),
                interval=q.bin.interval.lower(),
            )

        return VqlQuery(
            chart=q.chart,
            select=select,
            source=source,
            filter=filter_pred,
            group_by=group_by,
            order=order,
            bin=bin_spec,
        )

    def _resolve_source(
        self,
        src: TableSource,
        aliases: dict[str, str],
        outer_scopes: tuple[tuple[str, ...], ...],
    ) -> TableSource:
        del outer_scopes  # source tables are declared here, not looked up
        primary = self._require_table(src.primary)
        joins = tuple(
            Join(table=self._require_table(j.table), condition=j.condition) for j in src.joins
        )
        return TableSource(primary=primary, joins=joins)

    def _require_table(self, name: str) -> str:
        low = name.lower()
        if low not in self.columns:
            raise UnknownTableError(name, self.schema.db_name)
        return low

    def _colref(
        self,
        ref: ColumnRef,
        aliases: dict[str, str],
        scopes: tuple[tuple[str, ...], ...],
    ) -> ColumnRef:
        if ref.wildcard:
            raise NormalizationError("wildcard reference outside count() cannot be normalized")
        column = ref.column.lower()
        if ref.table:
            table = aliases.get(ref.table.lower(), ref.table.lower())
            if not any(table in frame for frame in scopes):
                raise UnknownTableError(ref.table, self.schema.db_name)
            if column not in self.columns[table]:
                raise UnknownColumnError(ref.column, [table])
            return ColumnRef(column=column, table=table)
        searched: list[str] = []
        for frame in scopes:
            owners = [t for t in frame if column in self.columns.get(t, ())]
            searched.extend(frame)
            if len(owners) > 1:
                raise AmbiguousColumnError(ref.column, owners)
            if owners:
                return ColumnRef(column=column, table=owners[0])
        raise UnknownColumnError(ref.column, list(dict.fromkeys(searched)))

    def _pick_replacement(
        self,
        primary: str,
        group_by: tuple[ColumnRef, ...],
        q: VqlQuery,
        aliases: dict[str, str],
        scopes: tuple[tuple[str, ...], ...],
    ) -> ColumnRef:
        for col in group_by:
            if col.table == primary:
                return col
        for expr in q.select:
            if expr.aggregate is None and not expr.operand.wildcard:
                return self._colref(expr.operand, aliases, scopes)
        return ColumnRef(column=self.columns[primary][0], table=primary)

    def _select_expr(self, e: SelectExpr, aliases, scopes, count_star_replacement) -> SelectExpr:
        if e.operand.wildcard:
            if e.aggregate != "count":
                raise NormalizationError(
                    "wildcard is only normalizable inside count(); got "
                    + (f"{e.aggregate}(*)" if e.aggregate else "a bare *")
                )
            return SelectExpr(operand=count_star_replacement(), aggregate="count")
        return SelectExpr(operand=self._colref(e.operand, aliases, scopes), aggregate=e.aggregate)

    def _value(self, v: ValueExpr, aliases, scopes) -> ValueExpr:
        if isinstance(v, Literal):
            return Literal(v.text.lower(), v.quoted) if v.quoted else v
        return self._colref(v, aliases, scopes)

    def _predicate(self, p: Predicate, aliases, scopes) -> Predicate:
        if isinstance(p, Comparison):
            return Comparison(
                left=self._value(p.left, aliases, scopes),
                op=_CANONICAL_OPS.get(p.op, p.op),
                right=self._value(p.right, aliases, scopes),
            )
        if isinstance(p, LikePredicate):
            return LikePredicate(
                column=self._colref(p.column, aliases, scopes),
                pattern=Literal(p.pattern.text.lower(), quoted=True),
                negated=p.negated,
            )
        if isinstance(p, BetweenPredicate):
            return BetweenPredicate(
                column=self._colref(p.column, aliases, scopes),
                low=self._value(p.low, aliases, scopes),
                high=self._value(p.high, aliases, scopes),
            )
        if isinstance(p, InPredicate):
            column = self._colref(p.column, aliases, scopes)
            if p.subquery is not None:
                subquery = self.normalize_level(p.subquery, aliases, scopes)
                return InPredicate(column=column, subquery=subquery, negated=p.negated)
            values = tuple(self._value(v, aliases, scopes) for v in p.values or ())
            return InPredicate(column=column, values=values, negated=p.negated)
        if isinstance(p, BoolOp):
            return BoolOp(op=p.op, operands=tuple(self._predicate(c, aliases, scopes) for c in p.operands))
        raise TypeError(f"not a predicate node: {p!r}")
