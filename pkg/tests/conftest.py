from pathlib import Path

import pytest

from viscorpus.dataset import load_dataset, load_schemas

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def schemas():
    return load_schemas(FIXTURES / "schemas.jsonl")


@pytest.fixture(scope="session")
def inn_schema(schemas):
    return schemas["inn_1"]


@pytest.fixture(scope="session")
def theme_schema(schemas):
    return schemas["theme_gallery"]


@pytest.fixture(scope="session")
def soccer_schema(schemas):
    return schemas["soccer_1"]


@pytest.fixture(scope="session")
def allergy_schema(schemas):
    return schemas["allergy_1"]


@pytest.fixture(scope="session")
def fixture_queries():
    lines = (FIXTURES / "queries_normalized.txt").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 50
    return lines


@pytest.fixture(scope="session")
def text2vis_records():
    return load_dataset(FIXTURES / "text2vis.jsonl", "text2vis").records


@pytest.fixture(scope="session")
def visqa_records():
    return load_dataset(FIXTURES / "visqa.jsonl", "visqa").records


@pytest.fixture(scope="session")
def tabletext_records():
    return load_dataset(FIXTURES / "tabletext.jsonl", "tabletext").records
