import random

import pytest
from hypothesis import strategies as st

from vknot import corpus
from vknot.diagram import SignedGaussDiagram, VirtualString


@pytest.fixture(scope="session")
def k1():
    return corpus.knot("k1")


@pytest.fixture(scope="session")
def k2():
    return corpus.knot("k2")


@pytest.fixture(scope="session")
def left():
    return corpus.string("k1_glued_3")


@pytest.fixture(scope="session")
def right():
    return corpus.string("k1_glued_4")


@pytest.fixture
def rng():
    return random.Random(12345)


@st.composite
def gauss_diagrams(draw, max_n=6, min_n=0):
    n = draw(st.integers(min_n, max_n))
    toks = [(c, h) for c in range(1, n + 1) for h in (False, True)]
    word = draw(st.permutations(toks))
    signs = {c: draw(st.sampled_from((1, -1))) for c in range(1, n + 1)}
    return SignedGaussDiagram(tuple(word), signs)


@st.composite
def strings(draw, max_n=6, min_n=0):
    n = draw(st.integers(min_n, max_n))
    toks = [(c, h) for c in range(1, n + 1) for h in (False, True)]
    return VirtualString(tuple(draw(st.permutations(toks))))


# acceptance criteria report one line each; collected here and echoed in the summary
ACCEPTANCE = {}


def record(number, title, ok, detail=""):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
