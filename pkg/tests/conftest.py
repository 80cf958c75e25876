import sys
from importlib import resources
from pathlib import Path

import pytest

from ggr import corpus, dsl

DATA = Path(__file__).parent / "data"
FIXTURES = Path(str(resources.files("ggr") / "fixtures"))

# sd3 element labels: s spans the idempotent class, i the nilpotent one
S, I = (1, 0), (0, 1)


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.ggr"


def load_fixture(name: str):
    return dsl.elaborate(dsl.parse_file(fixture_path(name)))


@pytest.fixture(scope="session")
def full_corpus():
    return corpus.build_corpus()


@pytest.fixture(scope="session")
def regular_corpus(full_corpus):
    from ggr.anneid import is_regular

    return [e for e in full_corpus if is_regular(e.anneid)]


@pytest.fixture
def sd3():
    return corpus.sd3()


@pytest.fixture
def zero3():
    return corpus.zero_product()


@pytest.fixture
def matrix():
    from ggr.anneid import anneid_from_graded

    return anneid_from_graded(corpus.matrix_m2f2())


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[number])
