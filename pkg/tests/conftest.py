import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from twofactor.census import random_matched_graph  # noqa: E402
from twofactor.corpus import DATA, corpus, graph_items, load_link  # noqa: E402
from twofactor.plane_graph import load_graph  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def graphs() -> dict:
    return {it.name: it.graph for it in graph_items()}


@pytest.fixture(scope="session")
def corpus_items():
    return corpus()


def graph_file(name: str):
    return load_graph(DATA / "graphs" / f"{name}.tfg")


def link(name: str):
    return load_link(name)


@st.composite
def matched_graphs(draw, max_m: int = 3):
    """Random connected planar matched cubic multigraphs on up to 2*max_m vertices."""
    m = draw(st.integers(1, max_m))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_matched_graph(m, random.Random(seed))


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
