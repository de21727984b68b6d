"""Shared fixtures for the toolkit test suite"""

import hypothesis
import pytest

from app.config import settings
from app.models.corpus import ParallelCorpus
from app.services.corpus_io import generate_synthetic
from app.services.rule_baseline import load_rules
from app.services.text_model import builtin_profile


hypothesis.settings.register_profile("toolkit", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("toolkit")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run desk-scale training tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale training runs, skipped without --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def official():
    return builtin_profile("basaa-official")


@pytest.fixture(scope="session")
def official_grave():
    return builtin_profile("basaa-official-grave")


@pytest.fixture(scope="session")
def catholic():
    return builtin_profile("basaa-catholic")


@pytest.fixture(scope="session")
def protestant():
    return builtin_profile("basaa-protestant")


@pytest.fixture(scope="session")
def catholic_rules():
    return load_rules(settings.rules_dir / "catholic-to-official.json")


@pytest.fixture(scope="session")
def synthetic_corpus(catholic, official, catholic_rules) -> ParallelCorpus:
    return generate_synthetic((catholic, official), catholic_rules, n=200, seed=7)


@pytest.fixture
def write_tsv(tmp_path):
    """Write (source, target[, split]) rows to a TSV file and return its path"""
    def _write(rows, name="corpus.tsv"):
        path = tmp_path / name
        path.write_text("".join("\t".join(row) + "\n" for row in rows), encoding="utf-8")
        return path
    return _write
