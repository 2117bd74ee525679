import random
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import graphs
from wgcalc.examples import split_branch_diagram, two_centre_steps
from wgcalc.formats import parse, to_shorthand
from wgcalc.generators import random_blowups, random_diagram, random_graph, random_sequence
from wgcalc.graph import (
    GraphError,
    WeightedGraph,
    are_isomorphic,
    canonical_key,
    chain,
    contractible_sites,
    cycle,
    is_at_most_linear,
    is_minimal,
    validate,
)
from wgcalc.minimality import (
    Diagram,
    check_graph_lemma,
    contraction_trace,
    dominate,
    is_contractible,
    is_contractible_numeric,
    minimal_model,
    relatively_minimize,
)
from wgcalc.moves import apply, blowdown, contraction_from_set, identity


def iso(g, text):
    return are_isomorphic(g, parse(text)) is not None


def _exhaustive_contractible(g: WeightedGraph) -> bool:
    # tries every blowdown order, so it does not rely on greedy soundness
    seen = set()
    stack = [g]
    while stack:
        h = stack.pop()
        k = canonical_key(h)
        if k in seen:
            continue
        seen.add(k)
        if len(h) == 1:
            (v,) = h.vertices
            if h.weight(v) == -1 and h.is_rational(v) and not h.edges:
                return True
        for v in contractible_sites(h):
            if h.degree(v) > 0:
                stack.append(blowdown(h, v))
    return False


def test_contractible_examples():
    assert is_contractible(chain([-1]))
    assert is_contractible(chain([-2, -1, -3]))
    assert not is_contractible(chain([-2, -1, -2]))
    assert is_contractible(chain([-2, -1, -3, -2]))
    assert not is_contractible(chain([-2, -2]))
    assert not is_contractible(chain([0]))
    assert not is_contractible(cycle([-1]))
    assert not is_contractible(chain([(-1, False)]))
    assert not is_contractible(cycle([-1, -2, -2]))
    with pytest.raises(GraphError):
        is_contractible(WeightedGraph.build({"a": -1, "b": -1}, []))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_blowups_of_a_point_are_contractible(seed, k):
    _, trace = random_blowups(random.Random(seed), chain([-1]), k)
    g = trace[-1]
    assert is_contractible(g) and is_contractible_numeric(g)


@settings(max_examples=300, deadline=None)
@given(graphs(max_vertices=5, weights=(-4, 1), max_loops=1, max_multiplicity=2, connected=True))
def test_greedy_contraction_matches_exhaustive_search(g):
    assert is_contractible(g) == _exhaustive_contractible(g)


@settings(max_examples=300, deadline=None)
@given(graphs(max_vertices=6, weights=(-4, 0), max_loops=1, max_multiplicity=2, connected=True))
def test_contractible_implies_numeric_condition(g):
    if is_contractible(g):
        assert is_contractible_numeric(g)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 7))
def test_visited_contractible_graphs_look_contractible(seed, k):
    _, trace = random_blowups(random.Random(seed), chain([-1]), k)
    for h in contraction_trace(trace[-1]):
        assert all(h.weight(v) < 0 for v in h.vertices)
        minus_one = [v for v in h.vertices if h.weight(v) == -1]
        assert all(is_at_most_linear(h, v) for v in minus_one)
        assert not any(h.weight(u) == -1 for v in minus_one for u in h.neighbors(v))


def test_minimal_model_examples():
    g = cycle([9])
    m, p = minimal_model(g)
    assert m == g and p.contracted == frozenset()
    g = chain([-1, -1, -3])
    assert iso(minimal_model(g)[0], "[[0,-3]]")
    assert iso(minimal_model(g, ["v1"])[0], "[[0,-2]]")
    assert iso(minimal_model(g, "v1")[0], "[[0,-2]]")
    with pytest.raises(GraphError):
        minimal_model(chain([-1]))
    with pytest.raises(GraphError):
        minimal_model(g, lambda h, sites: "v2")


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_minimal_model_is_minimal_and_replays(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 6, (-3, 2), max_loops=1, max_multiplicity=2, connected=True)
    assume(not validate(g))
    m, p = minimal_model(g, "random", seed)
    assert is_minimal(m)
    assert apply(g, p.sequence)[-1] == m
    assert len(m) == len(g) - len(p.contracted)


def test_two_centres_domination():
    g = chain([-1, 1])
    d = dominate(g, two_centre_steps())
    assert are_isomorphic(d.p1.target, g) is not None
    assert are_isomorphic(d.p2.target, apply(g, _seq(g, two_centre_steps()))[-1]) is not None
    r = relatively_minimize(d)
    assert r.relatively_minimal
    assert to_shorthand(r.top) == "[[-1,0,-1]]"
    assert len(r.p1.contracted) == len(r.p2.contracted) == 1


def _seq(g, moves):
    from wgcalc.moves import build_sequence

    return build_sequence(g, moves)[0]


def test_relatively_minimal_flag_is_recomputed():
    g = chain([-2, -1, -2])
    p = contraction_from_set(g, ["v1"])
    assert not Diagram(g, p, p).relatively_minimal
    assert Diagram(g, identity(g), p).relatively_minimal
    r = relatively_minimize(Diagram(g, p, p))
    assert r.relatively_minimal and len(r.top) == 2


def test_split_branch_graph_lemma():
    d = split_branch_diagram()
    assert d.relatively_minimal
    assert relatively_minimize(d) == d
    assert are_isomorphic(d.p1.target, d.p2.target) is not None
    report = check_graph_lemma(d)
    assert report.passed
    (w,) = report.c.witnesses
    assert w["vertex"] == "v" and w["degree"] == 3


def test_graph_lemma_rejects_bad_diagrams():
    g = chain([-2, -1, -2])
    p = contraction_from_set(g, ["v1"])
    with pytest.raises(GraphError):
        check_graph_lemma(Diagram(g, p, p))
    with pytest.raises(GraphError):
        check_graph_lemma(Diagram(g, identity(g), identity(g)))


def test_random_relatively_minimal_diagrams_pass_graph_lemma():
    rng = random.Random(20261016)
    nontrivial = 0
    for _ in range(500):
        d = random_diagram(rng)
        assert d.relatively_minimal
        report = check_graph_lemma(d)
        assert report.passed, report.as_dict()
        nontrivial += d.top != d.p1.target
    print(f"random diagrams with a nontrivial top: {nontrivial}/500")
    assert nontrivial > 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dominate_then_peel_passes_graph_lemma(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 4, (-3, 1), max_loops=0, max_multiplicity=1, connected=True)
    assume(not validate(g))
    g, _ = minimal_model(g)
    seq, trace = random_sequence(rng, g, 6)
    end, p = minimal_model(trace[-1])
    steps = list(seq.steps) + list(p.steps)
    d = relatively_minimize(dominate(g, steps))
    assert d.p1.target == g
    assert d.p2.target == end
    assert check_graph_lemma(d).passed


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_peeling_only_removes_commonly_contracted_vertices(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 4, (-3, 1), max_loops=0, max_multiplicity=1, connected=True)
    assume(not validate(g))
    g, _ = minimal_model(g)
    _, trace = random_blowups(rng, g, rng.randint(1, 5))
    top = trace[-1]
    _, p1 = minimal_model(top, "random", rng.randrange(2**32))
    _, p2 = minimal_model(top, "random", rng.randrange(2**32))
    d = Diagram(top, p1, p2)
    r = relatively_minimize(d)
    peeled = set(top.vertices) - set(r.top.vertices)
    assert peeled <= p1.contracted & p2.contracted
    assert r.p1.contracted == p1.contracted - peeled and r.p2.contracted == p2.contracted - peeled
    assert r.p1.target == p1.target and r.p2.target == p2.target
    assert r.relatively_minimal
