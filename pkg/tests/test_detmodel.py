from fractions import Fraction
from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detvan.abelian import AxisClass
from detvan.detmodel import (
    Chart, DetModel, NotQuadratic, NotReducible, axis_point, chart_report, classify_axis,
    generic_rank1_perturbation, quadratic_family, reduce_to_hypersurface, special_points,
    tjurina_chart, validate_model, ystar_reduction,
)
from detvan.errors import DomainError, ReseedRequired, StructuralError
from detvan.exprparse import load_model, parse_model, parse_poly
from detvan.idealalg import Ideal, ideal_contains
from detvan.polycore import evaluate_rational, poly_ring, render, substitute, to_ring, variable_names

from conftest import data_path


def test_threefold_chart_equations(threefold_model):
    chart = tjurina_chart(threefold_model, 0)
    names = ['v', 'w', 'x', 'y', 'z', 's']
    assert chart.names == tuple(names)
    assert chart.equations == (
        parse_poly('v+s*x', names),
        parse_poly('w+s*y', names),
        parse_poly('-2*x*y+s*(v^2+w^2+z^2)', names),
    )


def test_threefold_chart_reductions(threefold_model):
    chart0 = reduce_to_hypersurface(tjurina_chart(threefold_model, 0))
    assert chart0.hypersurface == parse_poly('s^3*x^2+s^3*y^2-2*x*y+s*z^2', ['x', 'y', 'z', 's'])
    assert render(chart0.eliminated['v']) in ('-x*s', '-s*x')
    assert chart0.transversal_variables == ('x', 'y', 'z')
    assert chart0.elimination_verified is True

    chart1 = reduce_to_hypersurface(tjurina_chart(threefold_model, 1))
    assert chart1.hypersurface == parse_poly('v^2+w^2-2*t^3*v*w+z^2', ['v', 'w', 'z', 't'])
    assert sorted(chart1.eliminated) == ['x', 'y']


def test_threefold_quadratic_families(threefold_model):
    chart0 = reduce_to_hypersurface(tjurina_chart(threefold_model, 0))
    Q0 = quadratic_family(chart0.hypersurface, 's')
    assert Q0.variables == ('x', 'y', 'z')
    assert Q0.to_list() == [['s^3', '-1', '0'], ['-1', 's^3', '0'], ['0', '0', 's']]
    assert render(Q0.det()) == 's^7-s'
    assert Q0.form(chart0.hypersurface.ring) == chart0.hypersurface

    chart1 = reduce_to_hypersurface(tjurina_chart(threefold_model, 1))
    Q1 = quadratic_family(chart1.hypersurface, 't')
    assert Q1.to_list() == [['1', '-t^3', '0'], ['-t^3', '1', '0'], ['0', '0', '1']]
    assert render(Q1.det()) == '-t^6+1'


def test_threefold_special_points_merge_into_one_class(threefold_model):
    chart0 = reduce_to_hypersurface(tjurina_chart(threefold_model, 0))
    Q0 = quadratic_family(chart0.hypersurface, 's')
    classes = special_points(Q0, 's')
    assert [c.to_dict() for c in classes] == [
        {'minpoly': 's^7-s', 'degree': 7, 'multiplicity': 1, 'corank': 1, 'class': 'D_infinity'},
    ]


def test_special_points_split_by_corank():
    ring = poly_ring(('x', 'y', 's'))
    x, y, s = ring.gens
    # corank 2 at s = 0, corank 1 at s = 1
    h = s * x ** 2 + s * (s - 1) * y ** 2
    Q = quadratic_family(h, 's')
    classes = special_points(Q, 's')
    summary = sorted((render(c.minpoly), c.multiplicity, c.corank, c.point_class) for c in classes)
    assert summary == [('s', 2, 2, 'non_reduced'), ('s-1', 1, 1, 'D_infinity')]


def test_special_points_degenerate_family():
    ring = poly_ring(('x', 'y', 's'))
    x, y, s = ring.gens
    with pytest.raises(DomainError):
        special_points(quadratic_family(s * x ** 2, 's'), 's')


def test_zero_column_chart():
    ring = poly_ring(('x', 'y', 'z'))
    x, y, z = ring.gens
    model = DetModel(((x, ring.zero), (y, ring.zero), (z, ring.zero)), ('x', 'y', 'z'))
    chart = tjurina_chart(model, 0)
    assert [render(e) for e in chart.equations] == ['x', 'y', 'z']


def test_not_reducible_chart():
    names = ('x', 'y', 'z', 's')
    equations = tuple(parse_poly(src, names) for src in ('s*x+y^2', 's*y+x^2', 's*z+x*y'))
    chart = Chart(index=0, coordinate='s', equations=equations, model_variables=('x', 'y', 'z'))
    assert isinstance(reduce_to_hypersurface(chart), NotReducible)


def test_reduction_survives_row_operations():
    # rows 1 and 2 swapped, row 1 added to row 3
    model = parse_model({
        'variables': ['v', 'w', 'x', 'y', 'z'],
        'matrix': [['w', 'y'], ['v', 'x'], ['-2*x*y+w', 'v^2+w^2+z^2+y']],
    })
    chart0 = reduce_to_hypersurface(tjurina_chart(model, 0))
    assert chart0.hypersurface == parse_poly('s^3*x^2+s^3*y^2-2*x*y+s*z^2', ['x', 'y', 'z', 's'])


def test_not_quadratic():
    h = parse_poly('x^3+s*y^2', ['x', 'y', 's'])
    assert isinstance(quadratic_family(h, 's'), NotQuadratic)
    with pytest.raises(StructuralError):
        quadratic_family(h, 'q')


def test_validate_threefold_model(threefold_model):
    report = validate_model(threefold_model, check_isolated=False)
    assert report.dimension == 3
    assert report.codimension == 2
    assert report.smoothable
    assert report.isolated is None


def test_validate_rejects_wrong_codimension():
    model = parse_model({'variables': ['x', 'y', 'z', 'w'], 'matrix': [['x', 'y'], ['x', 'y'], ['z', 'w']]})
    with pytest.raises(DomainError):
        validate_model(model, check_isolated=False)


def test_detmodel_shape_checks():
    ring = poly_ring(('x',))
    x = ring.gens[0]
    with pytest.raises(StructuralError):
        DetModel(((x, x), (x, x)), ('x',))
    with pytest.raises(DomainError):
        DetModel(((x, x), (x, x), (x, ring.one)), ('x',))


def test_first_attempt_is_the_unnormalized_perturbation(threefold_model):
    perturbation = generic_rank1_perturbation(threefold_model, seed=1, attempt=0)
    assert perturbation.B == ((0, 0), (0, 0), (1, 0))
    assert axis_point(perturbation) == (1, Fraction(0))
    chart1 = perturbation.charts[1]
    assert variable_names(chart1.equations[2])[-1] == perturbation.delta
    assert classify_axis(chart1, perturbation) == AxisClass.a_infinity()


def _degenerate_axis_chart():
    ring = poly_ring(('v', 'w', 'x', 'y', 'z', 't', 'delta'))
    v, w, x, y, z, t, delta = ring.gens
    equations = (t * v + x, t * w + y, v ** 2 + w ** 2 + t * z ** 2 - delta * t)
    return Chart(1, 't', equations, ('v', 'w', 'x', 'y', 'z'), ('delta',))


def test_classify_axis_sums_milnor_numbers_along_the_fiber():
    # Q(0) = diag(1, 1, 0); the perturbed h has two A1 points at t = 0, z = +-1
    chart1 = _degenerate_axis_chart()
    assert classify_axis(chart1, SimpleNamespace(delta='delta')) == AxisClass.icis(2)


def test_classify_axis_rejects_non_isolated_fiber():
    ring = poly_ring(('v', 'w', 'x', 'y', 'z', 't', 'delta'))
    v, w, x, y, z, t, delta = ring.gens
    equations = (t * v + x, t * w + y, v ** 2 + w ** 2 + t * z ** 2)
    chart1 = Chart(1, 't', equations, ('v', 'w', 'x', 'y', 'z'), ('delta',))
    with pytest.raises(DomainError):
        classify_axis(chart1, SimpleNamespace(delta='delta'))


def test_axis_collision_requires_reseed(swapped_threefold_model):
    with pytest.raises(ReseedRequired):
        generic_rank1_perturbation(swapped_threefold_model, seed=1, attempt=0)


def test_reseeded_perturbation_is_deterministic(threefold_model):
    def attempt(k):
        try:
            return generic_rank1_perturbation(threefold_model, seed=3, attempt=k).to_dict()
        except ReseedRequired as e:
            return e.reason

    assert [attempt(k) for k in (1, 2, 3)] == [attempt(k) for k in (1, 2, 3)]


def test_ystar_reduction_first_attempt(threefold_model):
    chart = tjurina_chart(threefold_model, 0)
    f, ystar = ystar_reduction(chart, seed=1)
    assert f == chart.equations[2]
    assert list(ystar) == list(chart.equations[:2])
    with pytest.raises(ReseedRequired):
        ystar_reduction(chart, seed=1, combination=[[1, 0, 0], [1, 0, 0], [0, 0, 1]])


def test_chart_report(threefold_model):
    doc = chart_report(threefold_model)
    assert [c['index'] for c in doc['charts']] == [0, 1]
    assert doc['charts'][0]['quadratic']['det'] == 's^7-s'
    assert doc['charts'][1]['special_points'] == [
        {'minpoly': 't^6-1', 'degree': 6, 'multiplicity': 1, 'corank': 1, 'class': 'D_infinity'},
    ]


MODEL_FILES = ['seven_point_threefold.json', 'rational_normal_cone.json', 'isolated_a1.json']


def _load(name):
    return load_model(data_path('models', name))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(MODEL_FILES), st.data())
def test_charts_agree_on_the_overlap(name, data):
    M = _load(name)
    chart0, chart1 = tjurina_chart(M, 0), tjurina_chart(M, 1)
    coords = st.fractions(min_value=-4, max_value=4, max_denominator=5)
    point = {v: data.draw(coords) for v in M.variables}
    t = data.draw(coords.filter(lambda q: q != 0))
    at_s = dict(point, **{chart0.coordinate: 1 / t})
    at_t = dict(point, **{chart1.coordinate: t})
    for e0, e1 in zip(chart0.equations, chart1.equations):
        assert evaluate_rational(e1, at_t) == t * evaluate_rational(e0, at_s)


@pytest.mark.parametrize('name', MODEL_FILES)
@pytest.mark.parametrize('index', [0, 1])
def test_elimination_recovers_the_minors(name, index):
    M = _load(name)
    chart = tjurina_chart(M, index)
    ideal = Ideal(chart.equations)
    minors = [to_ring(m, chart.names) for m in M.minors()]
    assert all(ideal_contains(ideal, m) for m in minors)

    reduced = reduce_to_hypersurface(chart)
    assert not isinstance(reduced, NotReducible)
    h = to_ring(reduced.hypersurface, chart.names)
    values = {k: to_ring(v, chart.names) for k, v in reduced.eliminated.items()}
    for m in minors:
        assert ideal_contains(Ideal((h,)), substitute(m, values))


_entry = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))


@settings(max_examples=40, deadline=None)
@given(st.lists(_entry, min_size=6, max_size=6))
def test_special_point_degrees_fill_the_discriminant(coefficients):
    ring = poly_ring(('x', 'y', 'z', 's'))
    x, y, z, s = ring.gens
    monomials = [x * x, y * y, z * z, x * y, x * z, y * z]
    h = sum(((a + b * s + c * s ** 2) * m for (a, b, c), m in zip(coefficients, monomials)), ring.zero)
    if not h:
        return
    Q = quadratic_family(h, 's')
    det = Q.det()
    if not det:
        return
    classes = special_points(Q, 's')
    assert sum(c.degree * c.multiplicity for c in classes) == det.degree()
    assert all(c.corank >= 1 for c in classes)
