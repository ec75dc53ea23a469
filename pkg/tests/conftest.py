from __future__ import annotations

import pathlib

import pytest

from spmdiag.ingest import SynthSpec, generate_trace
from spmdiag.roughset import DecisionTable

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def geo_spec() -> SynthSpec:
    return SynthSpec.from_json((FIXTURES / "geo_st_like_spec.json").read_text())


@pytest.fixture(scope="session")
def geo_trace(geo_spec):
    return generate_trace(geo_spec, seed=7)


@pytest.fixture(scope="session")
def balanced_spec() -> SynthSpec:
    return SynthSpec.from_json((FIXTURES / "balanced_spec.json").read_text())


@pytest.fixture(scope="session")
def balanced_trace(balanced_spec):
    return generate_trace(balanced_spec, seed=7)


@pytest.fixture(scope="session")
def table1() -> DecisionTable:
    return DecisionTable.from_tsv((FIXTURES / "table1.tsv").read_text())


@pytest.fixture(scope="session")
def table2() -> DecisionTable:
    return DecisionTable.from_tsv((FIXTURES / "table2.tsv").read_text())
