from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detvan.errors import DomainError, StructuralError
from detvan.exprparse import parse_poly
from detvan.polycore import (
    arith, differentiate, evaluate_rational, gcd_uni, poly_ring, render, specialize,
    squarefree_decompose, substitute, to_fraction, to_ring, used_variables, variable_names, with_ordering,
)


def test_poly_ring_rejects_duplicates_and_unknown_orderings():
    with pytest.raises(StructuralError):
        poly_ring(('x', 'x'))
    with pytest.raises(StructuralError):
        poly_ring(('x',), 'lex')


def test_arith_requires_same_variable_list():
    p = parse_poly('x+y', ['x', 'y'])
    q = parse_poly('x', ['x', 'z'])
    with pytest.raises(StructuralError):
        arith(p, q, 'add')
    assert arith(p, p, 'mul') == parse_poly('x^2+2*x*y+y^2', ['x', 'y'])


def test_differentiate():
    f = parse_poly('x^3*y+y^2', ['x', 'y'])
    assert differentiate(f, 'x') == parse_poly('3*x^2*y', ['x', 'y'])
    assert differentiate(f, 'y') == parse_poly('x^3+2*y', ['x', 'y'])


def test_substitute_introduces_new_variables():
    f = parse_poly('x^2+y', ['x', 'y'])
    value = parse_poly('s*t', ['s', 't'])
    g = substitute(f, {'x': value})
    assert variable_names(g) == ('x', 'y', 's', 't')
    assert to_ring(g, ('y', 's', 't')) == parse_poly('s^2*t^2+y', ['y', 's', 't'])


def test_substitute_rejects_name_collisions():
    f = parse_poly('x+y', ['x', 'y'])
    foreign = parse_poly('y*s', ['y', 's'])
    with pytest.raises(StructuralError):
        substitute(f, {'x': foreign})


def test_to_ring_cannot_drop_used_variables():
    f = parse_poly('x*y', ['x', 'y'])
    with pytest.raises(StructuralError):
        to_ring(f, ('x',))


def test_evaluate_and_specialize():
    f = parse_poly('x^2*y-3*y+1', ['x', 'y'])
    assert to_fraction(evaluate_rational(f, {'x': Fraction(1, 2), 'y': 4})) == Fraction(-10)
    g = specialize(f, {'y': 2})
    assert used_variables(g) == ('x',)
    with pytest.raises(StructuralError):
        evaluate_rational(f, {'x': 1})


def test_squarefree_decompose_reconstructs():
    s = poly_ring(('s',)).gens[0]
    p = 3 * s ** 2 * (s - 1) ** 3 * (s + 2)
    parts = squarefree_decompose(p)
    assert [k for _, k in parts] == [3, 2, 1]
    product = p.ring.one
    for factor, k in parts:
        product *= factor ** k
    assert product * 3 == p


def test_squarefree_of_zero_raises():
    with pytest.raises(DomainError):
        squarefree_decompose(poly_ring(('s',)).zero)


def test_gcd_uni():
    s = poly_ring(('s',)).gens[0]
    assert gcd_uni(s ** 7 - s, 2 * s ** 2 - 2) == s ** 2 - 1
    assert gcd_uni(s.ring.zero, 4 * s) == s
    with pytest.raises(DomainError):
        gcd_uni(s.ring.zero, s.ring.zero)


def test_render_is_grevlex_descending():
    s = poly_ring(('s',)).gens[0]
    assert render(s ** 7 - s) == 's^7-s'
    f = parse_poly('z^2*s+s^3*x^2-2*x*y+s^3*y^2', ['x', 'y', 'z', 's'])
    assert render(f) == 'x^2*s^3+y^2*s^3+z^2*s-2*x*y'
    assert render(f.ring.zero) == '0'


def test_with_ordering_keeps_terms():
    f = parse_poly('x+y^2', ['x', 'y'])
    g = with_ordering(f, 'local_negdegrevlex')
    assert dict(g) == dict(f)
    assert g.LM == (1, 0)
    assert f.LM == (0, 2)


small_coeff = st.integers(min_value=-5, max_value=5)
term = st.tuples(small_coeff, st.integers(0, 3), st.integers(0, 3))


@settings(max_examples=60, deadline=None)
@given(st.lists(term, min_size=1, max_size=6))
def test_render_parses_back(terms):
    ring = poly_ring(('x', 'y'))
    x, y = ring.gens
    f = sum((c * x ** a * y ** b for c, a, b in terms), ring.zero)
    assert parse_poly(render(f), ring) == f


_plane = poly_ring(('x', 'y'))


def _from_terms(ring, terms):
    gens = ring.gens
    f = ring.zero
    for c, *exponents in terms:
        monomial = ring(c)
        for g, e in zip(gens, exponents):
            monomial *= g ** e
        f += monomial
    return f


plane_poly = st.lists(term, max_size=5).map(lambda ts: _from_terms(_plane, ts))
point_coord = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(plane_poly, plane_poly, plane_poly)
def test_arith_ring_axioms(p, q, r):
    def add(a, b):
        return arith(a, b, 'add')

    def mul(a, b):
        return arith(a, b, 'mul')

    assert add(p, q) == add(q, p)
    assert mul(p, q) == mul(q, p)
    assert add(add(p, q), r) == add(p, add(q, r))
    assert mul(mul(p, q), r) == mul(p, mul(q, r))
    assert mul(p, add(q, r)) == add(mul(p, q), mul(p, r))
    assert arith(add(p, q), q, 'sub') == p


@settings(max_examples=60, deadline=None)
@given(plane_poly, plane_poly, st.sampled_from(['x', 'y']))
def test_differentiate_leibniz(p, q, var):
    assert differentiate(p * q, var) == differentiate(p, var) * q + p * differentiate(q, var)


@settings(max_examples=60, deadline=None)
@given(plane_poly, plane_poly, point_coord, point_coord)
def test_substitute_then_evaluate(f, g, a, b):
    point = {'x': a, 'y': b}
    composed = substitute(f, {'x': g})
    inner = to_fraction(evaluate_rational(g, point))
    assert evaluate_rational(composed, point) == evaluate_rational(f, {'x': inner, 'y': b})


_line = poly_ring(('s',))
line_poly = st.lists(st.tuples(small_coeff, st.integers(0, 6)), max_size=5).map(
    lambda ts: _from_terms(_line, ts))


@settings(max_examples=80, deadline=None)
@given(line_poly, line_poly, line_poly)
def test_gcd_uni_divides_both(p, q, common):
    p, q = p * common, q * common
    if not p and not q:
        return
    g = gcd_uni(p, q)
    assert g.LC == 1
    assert not p.rem(g)
    assert not q.rem(g)
    if common:
        assert not g.rem(common.monic())
