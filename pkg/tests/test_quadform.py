import sympy as sp
from hypothesis import given, settings

from conftest import graphs
from wgcalc.graph import chain, cycle
from wgcalc.moves import inner_blowup, outer_blowup
from wgcalc.quadform import (
    bareiss_determinant,
    discriminant,
    inertia,
    intersection_matrix,
    is_negative_definite,
)


def _oracle_inertia(g):
    """Signs of eigenvalues from the characteristic polynomial.

    A real symmetric matrix has only real roots, so Descartes' rule of signs is exact.
    """
    a = sp.Matrix(intersection_matrix(g).entries)
    x = sp.Symbol("x")
    coeffs = sp.Poly(a.charpoly(x).as_expr(), x).all_coeffs()[::-1]
    zero = next(i for i, c in enumerate(coeffs) if c != 0)
    rest = [c for c in coeffs[zero:]]

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    plus = changes(rest)
    minus = changes([c * (-1) ** i for i, c in enumerate(rest)])
    return plus, minus, zero


def test_info_example():
    g = chain([-2, -2])
    assert discriminant(g) == 3
    assert inertia(g).as_dict() == {"plus": 0, "minus": 2, "zero": 0}


def test_loop_does_not_touch_diagonal():
    assert intersection_matrix(cycle([9])).entries == ((9,),)
    assert intersection_matrix(cycle([0, -2])).entries == ((0, 2), (2, -2))


def test_nodal_cubic_inertia():
    assert inertia(cycle([9])).as_dict() == {"plus": 1, "minus": 0, "zero": 0}


@settings(max_examples=200, deadline=None)
@given(graphs(max_vertices=5))
def test_inertia_matches_characteristic_polynomial(g):
    i = inertia(g)
    assert (i.plus, i.minus, i.zero) == _oracle_inertia(g)


@settings(max_examples=200, deadline=None)
@given(graphs(max_vertices=6))
def test_discriminant_matches_sympy(g):
    a = sp.Matrix(intersection_matrix(g).entries)
    assert discriminant(g) == (-a).det()


@settings(max_examples=200, deadline=None)
@given(graphs(max_vertices=6))
def test_negative_definite_matches_inertia(g):
    assert is_negative_definite(g) == (inertia(g).minus == len(g))


def test_bareiss_zero_pivot():
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[0, 0], [0, 1]]) == 0
    assert bareiss_determinant([]) == 1


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_blowups_add_one_negative_direction(g):
    before = inertia(g)
    outs = [inner_blowup(g, e)[0] for e in sorted(g.edges)[:3]]
    outs.append(outer_blowup(g, sorted(g.vertices)[0])[0])
    for h in outs:
        after = inertia(h)
        assert (after.plus, after.zero, after.minus) == (before.plus, before.zero, before.minus + 1)
