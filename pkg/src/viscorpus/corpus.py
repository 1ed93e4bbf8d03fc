"""Hybrid pre-training corpus construction.

Two example families share one JSON-lines file
(``{objective, task, direction?, source, target}``):

* dual examples: tagged source/target pairs whose orientation is flipped
  with probability 0.5 (direction records which way a pair went);
* mlm examples: span-corrupted token sequences with ordered ``<mask_k>``
  sentinels and the omitted spans as the target.

Sampling across tasks uses temperature mixing: task i is drawn with
probability size_i^(1/T) / sum_j size_j^(1/T).

Randomness is derived per record as hash(global_seed, record_id), so
output never depends on worker count or input sharding.
"""

from __future__ import annotations

import hashlib
import random
import re
from collections.abc import Iterator
from dataclasses import dataclass
from pathlib import Path

from .errors import CorruptionError, FormatViolationError, MissingSchemaError, SpecialTokenCollisionError
from .jsonl import dump_jsonl, iter_jsonl
from .schema import DatabaseSchema, encode_schema, filter_schema, normalize_schema
from .table import encode_table, normalize_table
from .vql import normalize_vql, parse_vql, serialize_vql

NL_TOKEN = "<nl>"
VQL_TOKEN = "<vql>"
SCHEMA_TOKEN = "<schema>"
TABLE_TOKEN = "<table>"
DESCRIPTION_TOKEN = "<description>"
QUESTION_TOKEN = "<question>"
ANSWER_TOKEN = "<answer>"

NAMED_TOKENS = (
    NL_TOKEN,
    VQL_TOKEN,
    SCHEMA_TOKEN,
    TABLE_TOKEN,
    DESCRIPTION_TOKEN,
    QUESTION_TOKEN,
    ANSWER_TOKEN,
)

TASKS = ("text2vis", "vis2text", "table2text", "fevisqa")
OBJECTIVES = ("dual", "mlm")
DIRECTIONS = ("forward", "reverse")

_RESERVED_RE = re.compile(
    "|".join(re.escape(t) for t in NAMED_TOKENS) + r"|<mask_\d+>"
)
_SENTINEL_RE = re.compile(r"<mask_\d+>")


def sentinel(k: int) -> str:
    if k < 1:
        raise ValueError("sentinel index starts at 1")
    return f"<mask_{k}>"


def check_reserved(text: str) -> str:
    """Reject corpus text that collides with a reserved angle-bracket token."""
    hit = _RESERVED_RE.search(text)
    if hit:
        raise SpecialTokenCollisionError(
            f"text contains reserved token {hit.group(0)!r}: {text[:80]!r}"
        )
    return text


@dataclass(frozen=True)
class Segment:
    token: str
    text: str


@dataclass(frozen=True)
class DualPair:
    task: str
    side_a: tuple[Segment, ...]
    side_b: tuple[Segment, ...]

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")


def render_side(segments: tuple[Segment, ...]) -> str:
    parts: list[str] = []
    for seg in segments:
        parts.append(seg.token)
        if seg.text:
            parts.append(seg.text)
    return " ".join(parts)


@dataclass(frozen=True)
class OrientedExample:
    source: str
    target: str
    objective: str  # "dual" | "mlm"
    task: str
    direction: str | None = None  # dual only

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.objective == "mlm" and self.direction is not None:
            raise ValueError("mlm examples carry no direction")
        if self.objective == "dual" and self.direction not in DIRECTIONS:
            raise ValueError(f"dual examples need a direction, got {self.direction!r}")


@dataclass(frozen=True)
class MlmExample:
    corrupted_input: tuple[str, ...]
    target: tuple[str, ...]


def derive_seed(global_seed: int, record_id) -> int:
    """Stable per-record seed; independent of worker count and run order."""
    digest = hashlib.sha256(f"{global_seed}:{record_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


# -- dual-corpus pairs ----------------------------------------------------


def build_dual_pairs(
    records: list,
    schemas: dict[str, DatabaseSchema],
    max_n: int = 3,
    match_columns: bool = True,
) -> list[DualPair]:
    """One tagged pair per record, per the four task mappings.

    text2vis records additionally yield one vis-to-text pair per distinct
    query, with a single representative description (the record with the
    smallest id). ``max_n``/``match_columns`` configure the per-record
    schema filtration.
    """
    from .dataset import TableTextRecord, Text2VisRecord, VisQARecord

    def seg(token: str, text: str) -> Segment:
        return Segment(token, check_reserved(text))

    pairs: list[DualPair] = []
    vis2text_reps: dict[tuple[str, str], Text2VisRecord] = {}
    vis2text_encodings: dict[tuple[str, str], str] = {}

    for record in records:
        if isinstance(record, Text2VisRecord):
            schema = _schema_for(schemas, record.db_id, record.id)
            encoded_schema = _encode_filtered(record.question, schema, max_n, match_columns)
            query = _normalized_query(record.vql, schema)
            pairs.append(
                DualPair(
                    task="text2vis",
                    side_a=(seg(NL_TOKEN, record.question), seg(SCHEMA_TOKEN, encoded_schema)),
                    side_b=(seg(VQL_TOKEN, query),),
                )
            )
            key = (record.db_id, query)
            rep = vis2text_reps.get(key)
            if rep is None or str(record.id) < str(rep.id):
                vis2text_reps[key] = record
                vis2text_encodings[key] = encoded_schema
        elif isinstance(record, VisQARecord):
            schema = _schema_for(schemas, record.db_id, record.id)
            table_text = ""
            if record.table is not None:
                table_text = encode_table(normalize_table(record.table))
            pairs.append(
                DualPair(
                    task="fevisqa",
                    side_a=(
                        seg(QUESTION_TOKEN, record.question),
                        seg(VQL_TOKEN, _normalized_query(record.vql, schema)),
                        seg(SCHEMA_TOKEN, _encode_filtered(record.question, schema, max_n, match_columns)),
                        seg(TABLE_TOKEN, table_text),
                    ),
                    side_b=(seg(ANSWER_TOKEN, record.answer),),
                )
            )
        elif isinstance(record, TableTextRecord):
            pairs.append(
                DualPair(
                    task="table2text",
                    side_a=(seg(TABLE_TOKEN, encode_table(normalize_table(record.table))),),
                    side_b=(seg(DESCRIPTION_TOKEN, record.description),),
                )
            )
        else:
            raise TypeError(f"not a corpus record: {record!r}")

    for key in sorted(vis2text_reps, key=lambda k: (k[0], k[1])):
        rep = vis2text_reps[key]
        pairs.append(
            DualPair(
                task="vis2text",
                side_a=(seg(VQL_TOKEN, key[1]), seg(SCHEMA_TOKEN, vis2text_encodings[key])),
                side_b=(seg(DESCRIPTION_TOKEN, rep.question),),
            )
        )
    return pairs


def _schema_for(schemas: dict[str, DatabaseSchema], db_id: str, record_id) -> DatabaseSchema:
    if db_id not in schemas:
        raise MissingSchemaError(db_id, record_id)
    return schemas[db_id]


def _encode_filtered(
    question: str,
    schema: DatabaseSchema,
    max_n: int = 3,
    match_columns: bool = True,
) -> str:
    return encode_schema(
        filter_schema(question, normalize_schema(schema), max_n=max_n, match_columns=match_columns)
    )


def _normalized_query(vql: str, schema: DatabaseSchema) -> str:
    return serialize_vql(normalize_vql(parse_vql(vql), schema))


def orient_bidirectional(pair: DualPair, rng: random.Random) -> OrientedExample:
    """Flip source/target with probability 0.5."""
    forward = rng.random() < 0.5
    src, tgt = (pair.side_a, pair.side_b) if forward else (pair.side_b, pair.side_a)
    return OrientedExample(
        source=render_side(src),
        target=render_side(tgt),
        objective="dual",
        task=pair.task,
        direction="forward" if forward else "reverse",
    )


# -- span corruption ------------------------------------------------------


def span_corrupt(
    tokens: list[str] | tuple[str, ...],
    mask_rate: float = 0.15,
    mean_span: float = 3.0,
    rng: random.Random | None = None,
) -> MlmExample:
    """Mask round(mask_rate * n) tokens (clamped to [1, n-1]) as
    max(1, round(masked / mean_span)) disjoint, non-adjacent spans.

    Span lengths are a uniform composition of the masked count; the
    placements are uniform among all valid non-adjacent arrangements.
    Spans are replaced left-to-right by <mask_1>, <mask_2>, ...; the
    target lists each sentinel followed by its omitted span.
    """
    if rng is None:
        rng = random.Random()
    tokens = tuple(tokens)
    n = len(tokens)
    if n < 2:
        raise CorruptionError(f"need at least 2 tokens to corrupt, got {n}")
    masked = min(max(round(mask_rate * n), 1), n - 1)
    spans = max(1, round(masked / mean_span))
    spans = min(spans, masked, n - masked + 1)

    lengths = _uniform_composition(rng, masked, spans)
    extra = n - masked - (spans - 1)
    slack = _uniform_weak_composition(rng, extra, spans + 1)
    gaps = [slack[0]] + [1 + s for s in slack[1:-1]] + [slack[-1]]

    placed: list[tuple[int, int]] = []
    pos = 0
    for gap, length in zip(gaps, lengths):
        pos += gap
        placed.append((pos, length))
        pos += length
    return apply_span_mask(tokens, placed)


def apply_span_mask(
    tokens: list[str] | tuple[str, ...], spans: list[tuple[int, int]]
) -> MlmExample:
    """Mask explicit (start, length) spans, replacing the i-th span (in
    position order) with <mask_i>. Spans must be disjoint and non-adjacent."""
    tokens = tuple(tokens)
    ordered = sorted(spans)
    corrupted: list[str] = []
    target: list[str] = []
    pos = 0
    for i, (start, length) in enumerate(ordered, start=1):
        if start < pos or (corrupted and start == pos and _SENTINEL_RE.fullmatch(corrupted[-1])):
            raise CorruptionError(f"span at {start} overlaps or touches the previous span")
        if start + length > len(tokens) or length < 1:
            raise CorruptionError(f"span ({start}, {length}) is out of bounds")
        corrupted.extend(tokens[pos:start])
        mark = sentinel(i)
        corrupted.append(mark)
        target.append(mark)
        target.extend(tokens[start : start + length])
        pos = start + length
    corrupted.extend(tokens[pos:])
    return MlmExample(corrupted_input=tuple(corrupted), target=tuple(target))


def _uniform_composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniform composition of ``total`` into ``parts`` positive integers."""
    if parts == 1:
        return [total]
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    bounds = [0] + cuts + [total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def _uniform_weak_composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniform composition of ``total`` into ``parts`` non-negative integers."""
    if parts == 1:
        return [total]
    if total == 0:
        return [0] * parts
    cuts = sorted(rng.sample(range(total + parts - 1), parts - 1))
    out = [cuts[0]]
    for i in range(1, parts - 1):
        out.append(cuts[i] - cuts[i - 1] - 1)
    out.append(total + parts - 2 - cuts[-1])
    return out


def reconstruct_tokens(example: MlmExample) -> tuple[str, ...]:
    """Splice the target spans back at their sentinel positions."""
    spans: dict[str, list[str]] = {}
    current: list[str] | None = None
    for token in example.target:
        if _SENTINEL_RE.fullmatch(token):
            current = spans.setdefault(token, [])
        elif current is not None:
            current.append(token)
        else:
            raise CorruptionError("target does not start with a sentinel")
    out: list[str] = []
    for token in example.corrupted_input:
        if token in spans:
            out.extend(spans[token])
        else:
            out.append(token)
    return tuple(out)


def corrupt_text(
    text: str,
    mask_rate: float = 0.15,
    mean_span: float = 3.0,
    rng: random.Random | None = None,
    tokenizer=None,
) -> MlmExample:
    """Whitespace-tokenize (or use the supplied tokenizer) and corrupt."""
    tokens = tokenizer(text) if tokenizer else text.split()
    return span_corrupt(tokens, mask_rate=mask_rate, mean_span=mean_span, rng=rng)


# -- temperature mixing ---------------------------------------------------


@dataclass(frozen=True)
class MixtureConfig:
    temperature: float = 2.0
    seed: int = 0
    size_cap: int | None = None  # optional per-task example cap, off by default

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")


def mixture_rates(
    task_sizes: dict[str, int],
    temperature: float = 2.0,
    size_cap: int | None = None,
) -> dict[str, float]:
    """Sampling probability per task: size^(1/T), normalized."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    capped = {
        task: min(size, size_cap) if size_cap is not None else size
        for task, size in task_sizes.items()
    }
    weights = {task: size ** (1.0 / temperature) for task, size in capped.items()}
    total = sum(weights.values())
    if total == 0:
        raise ValueError("all task sizes are zero")
    return {task: w / total for task, w in weights.items()}


def task_stream(
    task_sizes: dict[str, int],
    temperature: float = 2.0,
    rng: random.Random | None = None,
    size_cap: int | None = None,
) -> Iterator[str]:
    """Infinite stream of task ids drawn at the temperature-mixed rates."""
    if rng is None:
        rng = random.Random()
    rates = mixture_rates(task_sizes, temperature, size_cap)
    names = sorted(rates)
    weights = [rates[n] for n in names]
    while True:
        yield rng.choices(names, weights=weights)[0]


def mixture_stream(
    examples_by_task: dict[str, list],
    temperature: float = 2.0,
    rng: random.Random | None = None,
    size_cap: int | None = None,
) -> Iterator:
    """Infinite stream of examples: tasks at temperature-mixed rates,
    examples uniform without replacement within each task epoch."""
    if rng is None:
        rng = random.Random()
    sizes = {task: len(examples) for task, examples in examples_by_task.items()}
    cursors: dict[str, list] = {task: [] for task in examples_by_task}
    for task in task_stream(sizes, temperature, rng, size_cap):
        if not cursors[task]:
            order = list(range(len(examples_by_task[task])))
            rng.shuffle(order)
            cursors[task] = order
        yield examples_by_task[task][cursors[task].pop()]


# -- corpus file I/O ------------------------------------------------------


def example_to_dict(example: OrientedExample) -> dict:
    out = {
        "objective": example.objective,
        "task": example.task,
        "source": example.source,
        "target": example.target,
    }
    if example.direction is not None:
        out["direction"] = example.direction
    return out


def example_from_dict(obj: dict, path: str = "", line: int = 0) -> OrientedExample:
    try:
        return OrientedExample(
            source=_field(obj, "source", str),
            target=_field(obj, "target", str),
            objective=_field(obj, "objective", str),
            task=_field(obj, "task", str),
            direction=obj.get("direction"),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatViolationError(str(exc), path, line) from exc


def _field(obj: dict, key: str, types):
    if key not in obj:
        raise KeyError(f"missing field {key!r}")
    value = obj[key]
    if not isinstance(value, types):
        raise ValueError(f"field {key!r} has wrong type {type(value).__name__}")
    return value


def write_corpus(examples: list[OrientedExample], path: str | Path) -> int:
    return dump_jsonl(path, (example_to_dict(e) for e in examples))


def read_corpus(path: str | Path) -> list[OrientedExample]:
    return [example_from_dict(obj, str(path), line) for line, obj in iter_jsonl(path)]


# -- end-to-end assembly --------------------------------------------------


def build_corpus(
    records: list,
    schemas: dict[str, DatabaseSchema],
    seed: int = 0,
    mask_rate: float = 0.15,
    mean_span: float = 3.0,
    max_n: int = 3,
    match_columns: bool = True,
) -> list[OrientedExample]:
    """Build the full hybrid corpus: oriented dual pairs plus one MLM
    example per pool text (questions, queries, schemas, tables,
    descriptions, answers)."""
    from .dataset import TableTextRecord, Text2VisRecord, VisQARecord

    pairs = build_dual_pairs(records, schemas, max_n=max_n, match_columns=match_columns)
    examples: list[OrientedExample] = []
    for i, pair in enumerate(pairs):
        rng = random.Random(derive_seed(seed, f"dual:{pair.task}:{i}"))
        examples.append(orient_bidirectional(pair, rng))

    pool: list[tuple[str, str, str]] = []  # (stable id, task, text)
    seen_dbs: set[str] = set()
    for record in records:
        if isinstance(record, Text2VisRecord):
            schema = _schema_for(schemas, record.db_id, record.id)
            pool.append((f"question:{record.id}", "text2vis", record.question))
            pool.append((f"vql:{record.id}", "text2vis", _normalized_query(record.vql, schema)))
            if record.db_id not in seen_dbs:
                seen_dbs.add(record.db_id)
                pool.append(
                    (
                        f"schema:{record.db_id}",
                        "text2vis",
                        encode_schema(normalize_schema(schema)),
                    )
                )
        elif isinstance(record, VisQARecord):
            schema = _schema_for(schemas, record.db_id, record.id)
            pool.append((f"question:{record.id}", "fevisqa", record.question))
            pool.append((f"answer:{record.id}", "fevisqa", record.answer))
            pool.append((f"vql:{record.id}", "fevisqa", _normalized_query(record.vql, schema)))
        elif isinstance(record, TableTextRecord):
            pool.append(
                (
                    f"table:{record.id}",
                    "table2text",
                    encode_table(normalize_table(record.table)),
                )
            )
            pool.append((f"description:{record.id}", "table2text", record.description))

    for text_id, task, text in pool:
        tokens = check_reserved(text).split()
        if len(tokens) < 2:
            continue
        rng = random.Random(derive_seed(seed, f"mlm:{text_id}"))
        mlm = span_corrupt(tokens, mask_rate=mask_rate, mean_span=mean_span, rng=rng)
        examples.append(
            OrientedExample(
                source=" ".join(mlm.corrupted_input),
                target=" ".join(mlm.target),
                objective="mlm",
                task=task,
            )
        )
    return examples
