"""Parser, serializer, and round-trip tests for the query language."""

import pytest

from viscorpus.errors import UnknownChartTypeError, VqlSyntaxError
from viscorpus.vql import (
    DEFAULT_CHART_KINDS,
    BoolOp,
    ColumnRef,
    Comparison,
    InPredicate,
    Literal,
    SelectExpr,
    has_joins,
    parse_vql,
    serialize_vql,
)

GOLD_SCATTER = (
    "visualize scatter select avg(rooms.baseprice), min(rooms.baseprice) "
    "from rooms group by rooms.decor"
)

CASE_STUDY = (
    "visualize bar select student.lname, count(student.lname) from student "
    "where stuid not in (select has_allergy.stuid from has_allergy "
    "join allergy_type on has_allergy.allergy = allergy_type.allergy "
    "where allergy_type.allergytype = 'food') "
    "group by lname order by count(student.lname) asc"
)


class TestParse:
    def test_scatter_with_aggregates(self):
        q = parse_vql(GOLD_SCATTER)
        assert q.chart.kind == "scatter"
        assert q.select == (
            SelectExpr(operand=ColumnRef(column="baseprice", table="rooms"), aggregate="avg"),
            SelectExpr(operand=ColumnRef(column="baseprice", table="rooms"), aggregate="min"),
        )
        assert q.source.primary == "rooms"
        assert q.group_by == (ColumnRef(column="decor", table="rooms"),)
        assert q.filter is None and q.order is None and q.bin is None

    def test_minimal_query_has_empty_clauses(self):
        q = parse_vql("visualize bar select a.x, count(a.x) from a")
        assert q.filter is None
        assert q.group_by == ()
        assert q.order is None
        assert q.bin is None

    def test_case_study_subquery(self):
        q = parse_vql(CASE_STUDY)
        assert q.chart.kind == "bar"
        sub = q.filter
        assert isinstance(sub, InPredicate) and sub.negated
        assert sub.subquery is not None
        assert sub.subquery.chart is None
        assert sub.subquery.source.primary == "has_allergy"
        assert len(sub.subquery.source.joins) == 1
        assert sub.subquery.filter is not None
        assert q.order is not None and q.order.direction == "asc"
        assert has_joins(q)

    def test_keywords_case_insensitive(self):
        upper = parse_vql("VISUALIZE BAR SELECT a.x FROM a WHERE a.x > 3 ORDER BY a.x DESC")
        lower = parse_vql("visualize bar select a.x from a where a.x > 3 order by a.x desc")
        assert upper == lower

    def test_aliases_preserved_in_alias_map(self):
        q = parse_vql(
            "visualize bar select t2.name from player as t1 join team as t2 on t1.team_id = t2.team_id"
        )
        assert q.source.alias_map == {"t1": "player", "t2": "team"}

    @pytest.mark.parametrize("kind", DEFAULT_CHART_KINDS)
    def test_all_chart_kinds(self, kind):
        q = parse_vql(f"visualize {kind} select a.x from a")
        assert q.chart.kind == kind
        assert serialize_vql(q) == f"visualize {kind} select a.x from a"

    def test_unknown_chart_kind(self):
        with pytest.raises(UnknownChartTypeError) as excinfo:
            parse_vql("visualize histogram select a.x from a")
        assert "bar" in str(excinfo.value)
        assert excinfo.value.supported == DEFAULT_CHART_KINDS

    def test_syntax_error_carries_offset_and_expected(self):
        text = "visualize bar select from a"
        with pytest.raises(VqlSyntaxError) as excinfo:
            parse_vql(text)
        assert excinfo.value.offset == text.index("from")
        assert excinfo.value.expected

    def test_trailing_garbage_rejected(self):
        with pytest.raises(VqlSyntaxError):
            parse_vql("visualize bar select a.x from a nonsense")

    def test_unterminated_string(self):
        with pytest.raises(VqlSyntaxError):
            parse_vql("visualize bar select a.x from a where a.x = 'oops")

    def test_boolean_precedence(self):
        q = parse_vql("visualize bar select a.x from a where a.x = 1 or a.y = 2 and a.z = 3")
        assert isinstance(q.filter, BoolOp) and q.filter.op == "or"
        left, right = q.filter.operands
        assert isinstance(left, Comparison)
        assert isinstance(right, BoolOp) and right.op == "and"

    def test_between_binds_its_own_and(self):
        q = parse_vql("visualize bar select a.x from a where a.x between 1 and 5 and a.y = 2")
        assert isinstance(q.filter, BoolOp) and q.filter.op == "and"
        assert len(q.filter.operands) == 2

    def test_number_literals(self):
        q = parse_vql("visualize bar select a.x from a where a.x >= 1.5 and a.y = -3")
        comparisons = q.filter.operands
        assert comparisons[0].right == Literal("1.5")
        assert comparisons[1].right == Literal("-3")

    def test_bin_clause(self):
        q = parse_vql("visualize bar select a.d, count(a.d) from a bin a.d by weekday")
        assert q.bin is not None
        assert q.bin.column == ColumnRef(column="d", table="a")
        assert q.bin.interval == "weekday"


class TestSerialize:
    def test_gold_scatter_exact(self):
        assert serialize_vql(parse_vql(GOLD_SCATTER)) == GOLD_SCATTER

    def test_no_trailing_whitespace_or_empty_clauses(self):
        text = serialize_vql(parse_vql("visualize bar select a.x from a"))
        assert text == "visualize bar select a.x from a"
        assert not text.endswith(" ")
        for keyword in ("where", "group", "order", "bin"):
            assert keyword not in text

    def test_roundtrip_over_fixture_corpus(self, fixture_queries):
        for line in fixture_queries:
            assert serialize_vql(parse_vql(line)) == line

    def test_ast_roundtrip_with_aliases(self):
        text = (
            "visualize bar select t2.name, count(t1.player_id) from player as t1 "
            "join team as t2 on t1.team_id = t2.team_id group by t2.name"
        )
        q = parse_vql(text)
        assert serialize_vql(q) == text
        assert parse_vql(serialize_vql(q)) == q

    def test_spaced_parens_mode(self):
        q = parse_vql("visualize pie select count(artist.country) from artist")
        assert serialize_vql(q, spaced_parens=True) == (
            "visualize pie select count ( artist.country ) from artist"
        )

    def test_or_inside_and_gets_parentheses(self):
        text = "visualize bar select a.x from a where (a.x = 1 or a.y = 2) and a.z = 3"
        q = parse_vql(text)
        assert serialize_vql(q) == text
        assert parse_vql(serialize_vql(q)) == q

    def test_in_list_rendering(self):
        text = "visualize bar select a.x from a where a.x in ('u', 'v') order by a.x asc"
        assert serialize_vql(parse_vql(text)) == text

    def test_case_study_roundtrip(self):
        assert serialize_vql(parse_vql(CASE_STUDY)) == CASE_STUDY

    def test_redundant_parentheses_collapse(self):
        q = parse_vql("visualize bar select a.x from a where ((a.x = 1))")
        assert isinstance(q.filter, Comparison)
        assert serialize_vql(q) == "visualize bar select a.x from a where a.x = 1"
        assert parse_vql(serialize_vql(q)) == q


class TestRandomAstRoundTrip:
    """serialize -> parse is the identity over generated ASTs."""

    def test_random_predicates(self):
        import random

        rng = random.Random(99)
        for _ in range(300):
            text = self._query(rng)
            q = parse_vql(text)
            assert parse_vql(serialize_vql(q)) == q

    def _query(self, rng) -> str:
        parts = [f"visualize {rng.choice(('bar', 'pie', 'stacked bar'))}"]
        parts.append("select " + ", ".join(self._expr(rng) for _ in range(rng.randint(1, 3))))
        parts.append("from t0")
        for i in range(rng.randint(0, 2)):
            parts.append(f"join t{i + 1} on {self._leaf(rng)}")
        if rng.random() < 0.8:
            parts.append("where " + self._pred(rng, depth=0))
        if rng.random() < 0.5:
            parts.append("group by " + ", ".join(self._col(rng) for _ in range(rng.randint(1, 2))))
        if rng.random() < 0.5:
            parts.append(f"order by {self._expr(rng)} {rng.choice(('asc', 'desc'))}")
        if rng.random() < 0.3:
            parts.append(f"bin {self._col(rng)} by {rng.choice(('year', 'month', 'weekday'))}")
        return " ".join(parts)

    def _expr(self, rng) -> str:
        col = self._col(rng)
        if rng.random() < 0.5:
            return f"{rng.choice(('count', 'sum', 'avg', 'max', 'min'))}({col})"
        return col

    def _col(self, rng) -> str:
        name = rng.choice(("x", "y", "z", "k"))
        if rng.random() < 0.7:
            return f"t{rng.randint(0, 2)}.{name}"
        return name

    def _value(self, rng) -> str:
        roll = rng.random()
        if roll < 0.4:
            return self._col(rng)
        if roll < 0.7:
            return str(rng.choice((0, 7, -3, 1.5, 250)))
        return rng.choice(("'food'", "'columbus crew'", "'a%'"))

    def _leaf(self, rng) -> str:
        roll = rng.random()
        col = self._col(rng)
        if roll < 0.55:
            op = rng.choice(("=", "!=", "<", "<=", ">", ">="))
            return f"{col} {op} {self._value(rng)}"
        if roll < 0.7:
            negated = "not " if rng.random() < 0.5 else ""
            values = ", ".join(self._value(rng) for _ in range(rng.randint(1, 3)))
            return f"{col} {negated}in ({values})"
        if roll < 0.85:
            negated = "not " if rng.random() < 0.5 else ""
            return f"{col} {negated}like '%a%'"
        return f"{col} between {self._value(rng)} and {self._value(rng)}"

    def _pred(self, rng, depth: int) -> str:
        if depth >= 2 or rng.random() < 0.4:
            return self._leaf(rng)
        op = rng.choice((" and ", " or "))
        children = []
        for _ in range(rng.randint(2, 3)):
            child = self._pred(rng, depth + 1)
            if rng.random() < 0.3:
                child = f"({child})"
            children.append(child)
        return op.join(children)
