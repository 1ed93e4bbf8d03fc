"""Recursive-descent parser for VQL.

Grammar (keywords case-insensitive):

    query      := "visualize" chart "select" expr ("," expr)*
                  "from" table ("as" alias)?
                  ("join" table ("as" alias)? "on" predicate)*
                  ("where" predicate)?
                  ("group" "by" colref ("," colref)*)?
                  ("order" "by" expr ("asc"|"desc")?)?
                  ("bin" colref "by" interval)?
    expr       := agg "(" colref | "*" ")" | colref | "*"
    predicate  := or-combination of comparisons, like, between,
                  in/not-in over literal lists or a parenthesized
                  subquery (a query without the visualize clause)

``and`` binds tighter than ``or``; parentheses group.
"""

from __future__ import annotations

from ..errors import UnknownChartTypeError, VqlSyntaxError
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
    SelectExpr,
    TableSource,
    ValueExpr,
    VqlQuery,
)
from .lexer import Token, tokenize


def parse_vql(text: str, chart_kinds: tuple[str, ...] = DEFAULT_CHART_KINDS) -> VqlQuery:
    """Parse one DV query string into an AST.

    Aliases are preserved in the table source; subqueries are parsed
    recursively. Raises VqlSyntaxError (with byte offset and the expected
    token set) on malformed input, UnknownChartTypeError on a chart
    keyword outside ``chart_kinds``.
    """
    parser = _Parser(tokenize(text), chart_kinds)
    query = parser.parse_query()
    parser.expect("EOF")
    return query


class _Parser:
    def __init__(self, tokens: list[Token], chart_kinds: tuple[str, ...]):
        self.tokens = tokens
        self.pos = 0
        self.chart_kinds = tuple(k.lower() for k in chart_kinds)

    # -- token helpers ------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        idx = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[idx]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def match(self, *kinds: str) -> Token | None:
        if self.peek().kind in kinds:
            return self.advance()
        return None

    def expect(self, *kinds: str) -> Token:
        tok = self.peek()
        if tok.kind in kinds:
            return self.advance()
        shown = tok.text or "end of input"
        raise VqlSyntaxError(f"unexpected {shown!r}", tok.offset, frozenset(kinds))

    # -- grammar ------------------------------------------------------

    def parse_query(self) -> VqlQuery:
        self.expect("VISUALIZE")
        chart = self.parse_chart()
        return self.parse_body(chart)

    def parse_body(self, chart: ChartType | None) -> VqlQuery:
        self.expect("SELECT")
        select = [self.parse_select_expr()]
        while self.match("COMMA"):
            select.append(self.parse_select_expr())

        self.expect("FROM")
        source = self.parse_source()

        filter_pred = self.parse_or() if self.match("WHERE") else None

        group_by: list[ColumnRef] = []
        if self.match("GROUP"):
            self.expect("BY")
            group_by.append(self.parse_colref())
            while self.match("COMMA"):
                group_by.append(self.parse_colref())

        order = None
        if self.match("ORDER"):
            self.expect("BY")
            key = self.parse_select_expr()
            direction = None
            tok = self.match("ASC", "DESC")
            if tok:
                direction = tok.kind.lower()
            order = OrderSpec(key=key, direction=direction)

        bin_spec = None
        if self.match("BIN"):
            column = self.parse_colref()
            self.expect("BY")
            interval = self.expect("IDENT", "NUMBER").text
            bin_spec = BinSpec(column=column, interval=interval)

        return VqlQuery(
            chart=chart,
            select=tuple(select),
            source=source,
            filter=filter_pred,
            group_by=tuple(group_by),
            order=order,
            bin=bin_spec,
        )

    def parse_chart(self) -> ChartType:
        first = self.expect("IDENT")
        if self.peek().kind == "IDENT":
            two_word = f"{first.text} {self.peek().text}".lower()
            if two_word in self.chart_kinds:
                self.advance()
                return ChartType(two_word)
        if first.text.lower() in self.chart_kinds:
            return ChartType(first.text.lower())
        raise UnknownChartTypeError(first.text, first.offset, self.chart_kinds)

    def parse_select_expr(self) -> SelectExpr:
        tok = self.peek()
        if tok.kind == "IDENT" and tok.text.lower() in AGGREGATES and self.peek(1).kind == "LPAREN":
            self.advance()
            self.expect("LPAREN")
            operand = self.parse_colref_or_star()
            self.expect("RPAREN")
            return SelectExpr(operand=operand, aggregate=tok.text.lower())
        return SelectExpr(operand=self.parse_colref_or_star())

    def parse_colref_or_star(self) -> ColumnRef:
        if self.match("STAR"):
            return ColumnRef(wildcard=True)
        return self.parse_colref()

    def parse_colref(self) -> ColumnRef:
        first = self.expect("IDENT")
        if self.match("DOT"):
            second = self.expect("IDENT")
            return ColumnRef(column=second.text, table=first.text)
        return ColumnRef(column=first.text)

    def parse_source(self) -> TableSource:
        primary = self.expect("IDENT").text
        primary_alias = self.expect("IDENT").text if self.match("AS") else None
        joins: list[Join] = []
        while self.match("JOIN"):
            table = self.expect("IDENT").text
            alias = self.expect("IDENT").text if self.match("AS") else None
            self.expect("ON")
            condition = self.parse_or()
            joins.append(Join(table=table, condition=condition, alias=alias))
        return TableSource(primary=primary, primary_alias=primary_alias, joins=tuple(joins))

    # Predicates: or < and < atom.

    def parse_or(self) -> Predicate:
        operands = [self.parse_and()]
        while self.match("OR"):
            operands.append(self.parse_and())
        return self._fold("or", operands)

    def parse_and(self) -> Predicate:
        operands = [self.parse_atom()]
        while self.match("AND"):
            operands.append(self.parse_atom())
        return self._fold("and", operands)

    @staticmethod
    def _fold(op: str, operands: list[Predicate]) -> Predicate:
        if len(operands) == 1:
            return operands[0]
        flat: list[Predicate] = []
        for node in operands:
            if isinstance(node, BoolOp) and node.op == op:
                flat.extend(node.operands)
            else:
                flat.append(node)
        return BoolOp(op=op, operands=tuple(flat))

    def parse_atom(self) -> Predicate:
        if self.match("LPAREN"):
            inner = self.parse_or()
            self.expect("RPAREN")
            return inner

        left = self.parse_value()
        tok = self.peek()

        if tok.kind == "OP":
            self.advance()
            right = self.parse_value()
            return Comparison(left=left, op=tok.text, right=right)

        negated = bool(self.match("NOT"))
        if self.match("IN"):
            return self._parse_in_tail(self._require_column(left, tok), negated)
        if self.match("LIKE"):
            pattern = self.expect("STRING")
            return LikePredicate(
                column=self._require_column(left, tok),
                pattern=Literal(pattern.text, quoted=True),
                negated=negated,
            )
        if negated:
            bad = self.peek()
            raise VqlSyntaxError(f"unexpected {bad.text!r}", bad.offset, frozenset({"IN", "LIKE"}))
        if self.match("BETWEEN"):
            low = self.parse_value()
            self.expect("AND")
            high = self.parse_value()
            return BetweenPredicate(column=self._require_column(left, tok), low=low, high=high)

        raise VqlSyntaxError(
            f"unexpected {tok.text or 'end of input'!r}",
            tok.offset,
            frozenset({"OP", "IN", "NOT", "LIKE", "BETWEEN"}),
        )

    def _parse_in_tail(self, column: ColumnRef, negated: bool) -> InPredicate:
        self.expect("LPAREN")
        if self.peek().kind == "SELECT":
            subquery = self.parse_body(chart=None)
            self.expect("RPAREN")
            return InPredicate(column=column, subquery=subquery, negated=negated)
        values = [self.parse_value()]
        while self.match("COMMA"):
            values.append(self.parse_value())
        self.expect("RPAREN")
        return InPredicate(column=column, values=tuple(values), negated=negated)

    @staticmethod
    def _require_column(value: ValueExpr, tok: Token) -> ColumnRef:
        if not isinstance(value, ColumnRef):
            raise VqlSyntaxError("predicate subject must be a column", tok.offset)
        return value

    def parse_value(self) -> ValueExpr:
        tok = self.peek()
        if tok.kind == "IDENT":
            return self.parse_colref()
        if tok.kind == "NUMBER":
            self.advance()
            return Literal(tok.text, quoted=False)
        if tok.kind == "STRING":
            self.advance()
            return Literal(tok.text, quoted=True)
        raise VqlSyntaxError(
            f"unexpected {tok.text or 'end of input'!r}",
            tok.offset,
            frozenset({"IDENT", "NUMBER", "STRING"}),
        )
