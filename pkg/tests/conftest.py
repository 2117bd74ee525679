import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from wgcalc.graph import Vertex, WeightedGraph

FIXTURES = Path(__file__).parent / "fixtures"


@st.composite
def graphs(draw, max_vertices=8, weights=(-5, 5), max_loops=2, max_multiplicity=3, connected=False):
    """Small weighted multigraphs with loops, optionally connected."""
    n = draw(st.integers(1, max_vertices))
    ids = [f"v{i}" for i in range(n)]
    verts = {v: Vertex(draw(st.integers(*weights)), draw(st.booleans()) or draw(st.booleans())) for v in ids}
    edges = []
    if connected:
        for i in range(1, n):
            edges.append((ids[draw(st.integers(0, i - 1))], ids[i]))
    pairs = [(ids[i], ids[j]) for i in range(n) for j in range(i + 1, n)]
    for pair in draw(st.lists(st.sampled_from(pairs), max_size=2 * n)) if pairs else []:
        if edges.count(pair) < max_multiplicity:
            edges.append(pair)
    for v in draw(st.lists(st.sampled_from(ids), max_size=max_loops)):
        edges.append((v, v))
    return WeightedGraph.build(verts, edges)


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    """Store and print one pass/fail line for an acceptance criterion."""
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
