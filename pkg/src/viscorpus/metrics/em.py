"""Exact-match metrics over DV queries.

Each query splits into three scored facets (chart kind, axis list, data
operations); EM requires all three to match. Axis comparison is
order-sensitive over the normalized select list; data comparison is
string equality of the canonical data component. A prediction that fails
to parse or normalize counts as a full mismatch rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NormalizationError, VqlSyntaxError
from ..schema import DatabaseSchema
from ..vql import QueryComponents, decompose, normalize_vql, parse_vql


@dataclass(frozen=True)
class SampleMatch:
    vis: bool
    axis: bool
    data: bool
    all: bool


@dataclass(frozen=True)
class EmReport:
    n: int
    vis_em: float
    axis_em: float
    data_em: float
    em: float
    per_sample: tuple[SampleMatch, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "vis_em": self.vis_em,
            "axis_em": self.axis_em,
            "data_em": self.data_em,
            "em": self.em,
            "per_sample": [
                {"vis": s.vis, "axis": s.axis, "data": s.data, "all": s.all}
                for s in self.per_sample
            ],
        }


def em_suite(
    pred: list[str],
    gold: list[str],
    schemas: DatabaseSchema | dict[str, DatabaseSchema] | None = None,
    db_ids: list[str] | None = None,
    normalize_gold: bool = True,
) -> EmReport:
    """Score predictions against references.

    ``schemas`` is a single schema applied to every sample, or a db_id ->
    schema mapping indexed by ``db_ids`` (one per sample). Predictions
    are always normalized when a schema is available; gold queries only
    when ``normalize_gold``. Without schemas both sides are parsed and
    canonically serialized but not normalized.
    """
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predictions vs {len(gold)} references")
    if isinstance(schemas, dict):
        if db_ids is None or len(db_ids) != len(pred):
            raise ValueError("a schema mapping needs one db_id per sample")
        per_sample_schema = [schemas.get(d) for d in db_ids]
    else:
        per_sample_schema = [schemas] * len(pred)

    samples: list[SampleMatch] = []
    for pred_text, gold_text, schema in zip(pred, gold, per_sample_schema):
        gold_parts = _components(gold_text, schema if normalize_gold else None)
        try:
            pred_parts = _components(pred_text, schema)
        except (VqlSyntaxError, NormalizationError):
            samples.append(SampleMatch(vis=False, axis=False, data=False, all=False))
            continue
        vis = pred_parts.vis == gold_parts.vis
        axis = pred_parts.axis == gold_parts.axis
        data = pred_parts.data == gold_parts.data
        samples.append(SampleMatch(vis=vis, axis=axis, data=data, all=vis and axis and data))

    n = len(samples)

    def rate(selector) -> float:
        return sum(1 for s in samples if selector(s)) / n if n else 0.0

    return EmReport(
        n=n,
        vis_em=rate(lambda s: s.vis),
        axis_em=rate(lambda s: s.axis),
        data_em=rate(lambda s: s.data),
        em=rate(lambda s: s.all),
        per_sample=tuple(samples),
    )


def _components(text: str, schema: DatabaseSchema | None) -> QueryComponents:
    query = parse_vql(text)
    if schema is not None:
        query = normalize_vql(query, schema)
    return decompose(query)
