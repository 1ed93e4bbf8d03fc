"""Command-line surface binding the pipeline end to end.

Every randomized subcommand takes a required ``--seed`` and is
bit-reproducible: same argv + same seed + same inputs gives byte-identical
outputs. Failures print a machine-readable JSON envelope on stderr and
exit with a code that identifies the failure class:

* 2: usage error (unknown flag, bad value)
* 3: missing or unreadable input file
* 4: data format violation (bad JSON lines, duplicate ids, key mismatches)
* 5: schema/dataset mismatch (unknown database, table, or column)
* 6: query syntax error
* 7: any other toolkit error
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import dataset as dataset_mod
from .errors import (
    FormatViolationError,
    MissingSchemaError,
    NormalizationError,
    UnknownTableError,
    VisCorpusError,
    VqlSyntaxError,
)
from .jsonl import atomic_write_text, iter_jsonl
from .metrics import em_suite, text_gen_report
from .schema import encode_schema, filter_schema, normalize_schema
from .table import DataTable, encode_table, normalize_table
from .vql import normalize_vql, parse_vql, serialize_vql

EXIT_USAGE = 2
EXIT_MISSING_INPUT = 3
EXIT_FORMAT = 4
EXIT_SCHEMA_MISMATCH = 5
EXIT_SYNTAX = 6
EXIT_OTHER = 7

# Pipeline defaults, shared by the option declarations below.
DEFAULT_MASK_RATE = 0.15
DEFAULT_MEAN_SPAN = 3.0
DEFAULT_TEMPERATURE = 2.0
DEFAULT_RATIOS = "0.7,0.1,0.2"
DEFAULT_CELL_LIMIT = 150
DEFAULT_MAX_N = 3


@click.group(name="viscorpus")
def cli():
    """Corpus engineering for visualization-query/text datasets."""


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        return 130
    except click.UsageError as exc:
        _envelope("UsageError", exc.format_message(), EXIT_USAGE)
        return EXIT_USAGE
    except click.ClickException as exc:
        _envelope(type(exc).__name__, exc.format_message(), EXIT_OTHER)
        return EXIT_OTHER
    except FileNotFoundError as exc:
        _envelope("MissingInput", str(exc), EXIT_MISSING_INPUT)
        return EXIT_MISSING_INPUT
    except VqlSyntaxError as exc:
        _envelope(type(exc).__name__, str(exc), EXIT_SYNTAX)
        return EXIT_SYNTAX
    except (MissingSchemaError, NormalizationError, UnknownTableError) as exc:
        _envelope(type(exc).__name__, str(exc), EXIT_SCHEMA_MISMATCH)
        return EXIT_SCHEMA_MISMATCH
    except FormatViolationError as exc:
        _envelope(type(exc).__name__, str(exc), EXIT_FORMAT)
        return EXIT_FORMAT
    except (VisCorpusError, ValueError) as exc:
        _envelope(type(exc).__name__, str(exc), EXIT_OTHER)
        return EXIT_OTHER


def _envelope(kind: str, message: str, code: int) -> None:
    print(
        json.dumps({"error": {"kind": kind, "message": message, "exit_code": code}}, sort_keys=True),
        file=sys.stderr,
    )


def _dump_json(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if out:
        atomic_write_text(out, text)
    else:
        click.echo(text, nl=False)


def _load_one_schema(path: str, db_id: str | None):
    schemas = dataset_mod.load_schemas(path)
    if db_id is not None:
        if db_id not in schemas:
            raise MissingSchemaError(db_id)
        return schemas[db_id]
    if len(schemas) != 1:
        raise click.UsageError(
            f"schema file holds {len(schemas)} databases; pick one with --db-id"
        )
    return next(iter(schemas.values()))


# -- normalize / filter-schema / encode ------------------------------------


@cli.command()
@click.option("--schema", "schema_path", required=True)
@click.option("--db-id", default=None, help="Database to use when the schema file holds several.")
@click.option("--query", required=True, help="DV query text to standardize.")
@click.option("--spaced-parens", is_flag=True, default=False, show_default=True,
              help="Emit spaces inside parentheses.")
def normalize(schema_path, db_id, query, spaced_parens):
    """Standardize a DV query against its database schema."""
    schema = _load_one_schema(schema_path, db_id)
    normalized = normalize_vql(parse_vql(query), schema)
    click.echo(serialize_vql(normalized, spaced_parens=spaced_parens))


@cli.command(name="filter-schema")
@click.option("--schema", "schema_path", required=True)
@click.option("--db-id", default=None)
@click.option("--question", required=True)
@click.option("--max-n", default=DEFAULT_MAX_N, show_default=True, help="Largest n-gram length to match.")
@click.option("--match-columns/--no-match-columns", default=True, show_default=True)
@click.option("--encoded", is_flag=True, default=False, show_default=True,
              help="Print the linearized sub-schema instead of JSON.")
def filter_schema_cmd(schema_path, db_id, question, max_n, match_columns, encoded):
    """Keep the tables the question mentions (n-gram match)."""
    schema = normalize_schema(_load_one_schema(schema_path, db_id))
    sub = filter_schema(question, schema, max_n=max_n, match_columns=match_columns)
    if encoded:
        click.echo(encode_schema(sub))
    else:
        _dump_json(dataset_mod.schema_to_dict(sub), None)


@cli.command()
@click.option("--kind", type=click.Choice(["query", "schema", "table"]), required=True)
@click.option("--query", default=None, help="DV query text (kind=query).")
@click.option("--schema", "schema_path", default=None)
@click.option("--db-id", default=None)
@click.option("--table", "table_path", default=None,
              help="JSON file with headers/rows (and optional owner).")
@click.option("--spaced-parens", is_flag=True, default=False, show_default=True)
def encode(kind, query, schema_path, db_id, table_path, spaced_parens):
    """Linearize a query, schema, or table to its text encoding."""
    if kind == "query":
        if query is None:
            raise click.UsageError("--query is required for kind=query")
        click.echo(serialize_vql(parse_vql(query), spaced_parens=spaced_parens))
    elif kind == "schema":
        if schema_path is None:
            raise click.UsageError("--schema is required for kind=schema")
        click.echo(encode_schema(normalize_schema(_load_one_schema(schema_path, db_id))))
    else:
        if table_path is None:
            raise click.UsageError("--table is required for kind=table")
        obj = json.loads(Path(table_path).read_text(encoding="utf-8"))
        table = DataTable(
            headers=tuple(obj["headers"]),
            rows=tuple(tuple(str(c) for c in row) for row in obj["rows"]),
            owner=obj.get("owner"),
        )
        click.echo(encode_table(normalize_table(table)))


# -- preprocess / split / stats ---------------------------------------------


@cli.command()
@click.option("--kind", type=click.Choice(list(dataset_mod.KINDS)), required=True)
@click.argument("input_path")
@click.option("--out", required=True, help="Kept records (JSON lines).")
@click.option("--rejects", "rejects_path", default=None,
              help="Where to write load rejects and dropped records.")
@click.option("--cell-limit", default=DEFAULT_CELL_LIMIT, show_default=True,
              help="Inclusive cell-count bound for chart-derived tables.")
def preprocess(kind, input_path, out, rejects_path, cell_limit):
    """Drop incomplete, Chinese-question, and oversized-table records."""
    loaded = dataset_mod.load_dataset(input_path, kind)
    result = dataset_mod.preprocess(loaded.records, cell_limit=cell_limit)
    dataset_mod.write_dataset(result.kept, out)
    report = {
        "loaded": len(loaded.records),
        "load_rejects": len(loaded.rejects),
        "kept": len(result.kept),
        "dropped": len(result.dropped),
    }
    if rejects_path:
        lines = [
            {"line": r.line, "reason": r.reason, "stage": "load"} for r in loaded.rejects
        ] + [
            {"id": d.record.id, "reason": d.reason, "stage": "preprocess"}
            for d in result.dropped
        ]
        from .jsonl import dump_jsonl

        dump_jsonl(rejects_path, lines)
    _dump_json(report, None)


@cli.command()
@click.option("--kind", type=click.Choice(list(dataset_mod.KINDS)), required=True)
@click.argument("input_path")
@click.option("--seed", required=True, type=int, help="Shuffle seed; required for reproducibility.")
@click.option("--ratios", default=DEFAULT_RATIOS, show_default=True,
              help="train,valid,test instance-count targets.")
@click.option("--use-published/--no-use-published", default=True, show_default=True,
              help="Prefer split fields already present on every record.")
@click.option("--out", default=None, help="Write the assignment JSON here instead of stdout.")
def split(kind, input_path, seed, ratios, use_published, out):
    """Partition at database granularity (cross-domain split)."""
    records = dataset_mod.load_dataset(input_path, kind, strict=True).records
    ratio_triple = tuple(float(x) for x in ratios.split(","))
    assignment = dataset_mod.published_splits(records) if use_published else None
    source = "published"
    if assignment is None:
        assignment = dataset_mod.partition_by_database(records, ratio_triple, seed)
        source = "greedy"
    counts = {s: 0 for s in dataset_mod.SPLITS}
    for record in records:
        counts[assignment.of(dataset_mod.partition_key(record))] += 1
    _dump_json(
        {
            "source": source,
            "seed": seed,
            "ratios": list(ratio_triple),
            "instances": counts,
            "assignment": assignment.to_dict(),
        },
        out,
    )


class _StrKeyAssignment(dataset_mod.SplitAssignment):
    """Assignment whose keys were round-tripped through JSON (strings)."""

    def of(self, key) -> str:
        return self.assignment[str(key)]


@cli.command()
@click.option("--kind", type=click.Choice(list(dataset_mod.KINDS)), required=True)
@click.argument("input_path")
@click.option("--splits", "splits_path", default=None,
              help="Assignment JSON produced by the split subcommand.")
@click.option("--out", default=None)
def stats(kind, input_path, splits_path, out):
    """Counts per split / join-status / question-type / cell-bucket."""
    records = dataset_mod.load_dataset(input_path, kind, strict=True).records
    if splits_path:
        obj = json.loads(Path(splits_path).read_text(encoding="utf-8"))
        assignment = _StrKeyAssignment(obj.get("assignment", obj))
    elif records and all(r.split is not None for r in records):
        assignment = _StrKeyAssignment(dataset_mod.published_splits(records).to_dict())
    else:
        assignment = None
    if assignment is not None:
        missing = {
            str(dataset_mod.partition_key(r)) for r in records
        } - set(assignment.assignment)
        if missing:
            raise FormatViolationError(
                f"splits lack {len(missing)} keys (e.g. {sorted(missing)[0]!r})"
            )
    report = dataset_mod.stats(records, assignment)
    _dump_json(report, out)


# -- corpus -------------------------------------------------------------------


@cli.command(name="build-corpus")
@click.option("--text2vis", "text2vis_path", default=None)
@click.option("--visqa", "visqa_path", default=None)
@click.option("--tabletext", "tabletext_path", default=None)
@click.option("--schemas", "schemas_path", default=None,
              help="Required when text2vis or visqa records are given.")
@click.option("--seed", required=True, type=int)
@click.option("--mask-rate", default=DEFAULT_MASK_RATE, show_default=True)
@click.option("--mean-span", default=DEFAULT_MEAN_SPAN, show_default=True)
@click.option("--max-n", default=DEFAULT_MAX_N, show_default=True,
              help="Largest n-gram length for the per-record schema filtration.")
@click.option("--match-columns/--no-match-columns", default=True, show_default=True)
@click.option("--out", required=True)
def build_corpus(text2vis_path, visqa_path, tabletext_path, schemas_path, seed,
                 mask_rate, mean_span, max_n, match_columns, out):
    """Build the hybrid corpus: oriented dual pairs plus MLM examples."""
    records: list = []
    for path, kind in (
        (text2vis_path, "text2vis"),
        (visqa_path, "visqa"),
        (tabletext_path, "tabletext"),
    ):
        if path:
            records.extend(dataset_mod.load_dataset(path, kind, strict=True).records)
    if not records:
        raise click.UsageError("no input records; pass --text2vis/--visqa/--tabletext")
    schemas = dataset_mod.load_schemas(schemas_path) if schemas_path else {}
    examples = corpus_mod.build_corpus(
        records, schemas, seed=seed, mask_rate=mask_rate, mean_span=mean_span,
        max_n=max_n, match_columns=match_columns,
    )
    count = corpus_mod.write_corpus(examples, out)
    _dump_json({"examples": count, "out": out}, None)


@cli.command(name="sample-mixture")
@click.option("--corpus", "corpus_path", required=True)
@click.option("--seed", required=True, type=int)
@click.option("--temperature", default=DEFAULT_TEMPERATURE, show_default=True)
@click.option("--size-cap", default=None, type=int, show_default=True,
              help="Optional per-task example cap before mixing.")
@click.option("--n", "n_draws", required=True, type=int)
@click.option("--out", required=True)
def sample_mixture(corpus_path, seed, temperature, size_cap, n_draws, out):
    """Draw examples with temperature-mixed task rates."""
    import itertools
    import random as random_mod

    config = corpus_mod.MixtureConfig(temperature=temperature, seed=seed, size_cap=size_cap)
    examples = corpus_mod.read_corpus(corpus_path)
    by_task: dict[str, list] = {}
    for example in examples:
        by_task.setdefault(example.task, []).append(example)
    stream = corpus_mod.mixture_stream(
        by_task,
        temperature=config.temperature,
        rng=random_mod.Random(config.seed),
        size_cap=config.size_cap,
    )
    sampled = list(itertools.islice(stream, n_draws))
    corpus_mod.write_corpus(sampled, out)
    _dump_json({"drawn": len(sampled), "out": out}, None)


# -- evaluate -----------------------------------------------------------------


@cli.command()
@click.option("--task", type=click.Choice(list(corpus_mod.TASKS)), required=True)
@click.argument("pred_path")
@click.argument("gold_path")
@click.option("--schemas", "schemas_path", default=None,
              help="Database schemas for query normalization (text2vis).")
@click.option("--normalize-gold/--no-normalize-gold", default=True, show_default=True)
@click.option("--out", default=None)
def evaluate(task, pred_path, gold_path, schemas_path, normalize_gold, out):
    """Score predictions against gold (EM family or BLEU/ROUGE/METEOR)."""
    preds = {obj["id"]: obj for _, obj in iter_jsonl(pred_path) if "id" in obj}
    golds = {obj["id"]: obj for _, obj in iter_jsonl(gold_path) if "id" in obj}
    if set(preds) != set(golds):
        only_pred = sorted(set(preds) - set(golds), key=str)[:3]
        only_gold = sorted(set(golds) - set(preds), key=str)[:3]
        raise FormatViolationError(
            f"prediction/gold ids differ (pred-only e.g. {only_pred}, gold-only e.g. {only_gold})"
        )
    ids = sorted(golds, key=str)
    pred_texts = [_field_of(preds[i], ("prediction", "vql", "description", "answer"), pred_path) for i in ids]
    if task == "text2vis":
        gold_texts = [_field_of(golds[i], ("vql", "reference"), gold_path) for i in ids]
        schemas = dataset_mod.load_schemas(schemas_path) if schemas_path else None
        db_ids = [golds[i].get("db_id") for i in ids] if schemas else None
        report = em_suite(
            pred_texts, gold_texts, schemas=schemas, db_ids=db_ids, normalize_gold=normalize_gold
        ).to_dict()
    else:
        field = {"vis2text": "description", "table2text": "description", "fevisqa": "answer"}[task]
        gold_texts = [_field_of(golds[i], (field, "reference"), gold_path) for i in ids]
        report = text_gen_report(pred_texts, gold_texts).to_dict()
    _dump_json(report, out)


def _field_of(obj: dict, names: tuple[str, ...], path: str) -> str:
    for name in names:
        if name in obj and isinstance(obj[name], str):
            return obj[name]
    raise FormatViolationError(f"record {obj.get('id')!r} has none of {names}", str(path))


if __name__ == "__main__":
    sys.exit(main())
