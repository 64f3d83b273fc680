import pytest

from detvan.abelian import INTEGERS, TRIVIAL, AbelianGroup
from detvan.errors import DomainError
from detvan.exprparse import parse_model
from detvan.idealalg import INFINITE
from detvan.pipeline import (
    ISOLATED_TJURINA, LINE_QUADRATIC, SEED_INDEPENDENT_KEYS, SMOOTH_TRANSFORM, UNSUPPORTED,
    HomologyReport, analyze, betti_isolated, consistency_checks, sweep,
)


def _answer(report):
    doc = report.to_dict()
    return {k: doc[k] for k in SEED_INDEPENDENT_KEYS}


@pytest.fixture(scope='module')
def threefold_report():
    from detvan.exprparse import load_model
    from conftest import data_path

    return analyze(load_model(data_path('models', 'seven_point_threefold.json')), seed=1, check_isolated=False)


@pytest.mark.slow
def test_seven_point_threefold_homology(threefold_report):
    report = threefold_report
    assert report.classification == LINE_QUADRATIC
    assert report.betti == [1, 0, 1, 14]
    assert report.euler == -12
    assert report.vertical_rank == 1
    assert report.axis == {'class': 'A_infinity'}
    assert report.affine_betti == [1, 0, 0, 13]
    assert sum(entry['degree'] for entry in report.special_points) == 7
    assert [entry['class'] for entry in report.special_points] == ['D_infinity']
    assert all(check.passed for check in report.checks)


@pytest.mark.slow
def test_seven_point_threefold_trace(threefold_report):
    stages = [entry['stage'] for entry in threefold_report.trace]
    for stage in ('validate', 'reduction', 'singular_locus', 'quadratic_family', 'special_points',
                  'transversal', 'perturbation', 'polar', 'wang', 'assembly', 'transfer'):
        assert stage in stages
    cross = next(e for e in threefold_report.trace if e['stage'] == 'special_points')['cross_check']
    assert cross['passed']
    assert cross['detail'] == 'chart 0 sees 6, chart 1 sees 6'
    assert threefold_report.transversal['milnor'] == 1


@pytest.mark.slow
def test_threefold_report_is_json_ready(threefold_report):
    import json

    doc = threefold_report.to_dict()
    assert list(doc) == sorted(doc)
    assert 'reason' not in doc
    assert json.loads(json.dumps(doc)) == doc
    assert doc['homology'][3] == {'degree': 3, 'rank': 14, 'torsion': []}


@pytest.mark.slow
def test_swapped_columns_reseed_and_reach_infinity(swapped_threefold_model):
    report = analyze(swapped_threefold_model, seed=1, check_isolated=False)
    assert report.classification == LINE_QUADRATIC
    assert report.reseeds >= 1
    assert sum(entry['degree'] for entry in report.special_points) == 7
    assert any(entry['chart'] == 'infinity' for entry in report.special_points)
    assert report.betti == [1, 0, 1, 14]
    assert any(e['stage'] == 'reseed' for e in report.trace)


@pytest.mark.slow
def test_row_operations_do_not_change_the_answer(threefold_report):
    model = parse_model({
        'variables': ['v', 'w', 'x', 'y', 'z'],
        'matrix': [['w', 'y'], ['v', 'x'], ['-2*x*y+w', 'v^2+w^2+z^2+y']],
    })
    report = analyze(model, seed=1, check_isolated=False)
    assert report.betti == threefold_report.betti
    assert report.special_points == threefold_report.special_points


@pytest.mark.slow
def test_seed_independence(threefold_model, threefold_report):
    for seed in (2, 3, 4, 5):
        assert _answer(analyze(threefold_model, seed=seed, check_isolated=False)) == _answer(threefold_report)


@pytest.mark.slow
def test_analysis_is_deterministic(threefold_model, threefold_report):
    again = analyze(threefold_model, seed=1, check_isolated=False)
    assert again.to_dict() == threefold_report.to_dict()


def test_rational_normal_cone_is_smooth(cone_model):
    report = analyze(cone_model, seed=1)
    assert report.classification == SMOOTH_TRANSFORM
    assert report.dimension == 2
    assert report.betti == [1, 0, 1]
    doc = report.to_dict()
    assert doc['homology'][1] == {'degree': 1, 'rank': 0, 'torsion': None}
    assert report.euler == 2
    assert all(check.passed for check in report.checks)


def test_isolated_a1_point(isolated_model):
    report = analyze(isolated_model, seed=1, check_isolated=False)
    assert report.classification == ISOLATED_TJURINA
    assert report.betti == [1, 0, 1, 1]
    assert report.homology[3] == INTEGERS
    assert report.euler == 1
    points = next(e for e in report.trace if e['stage'] == 'isolated_points')['points']
    assert points == [{'chart': 0, 'value': '0', 'milnor': 1}]
    assert all(check.passed for check in report.checks)


def test_analyze_rejects_other_ambient_dimensions():
    model = parse_model({'variables': ['x', 'y', 'z'], 'matrix': [['x', 'y'], ['y', 'z'], ['z', 'x']]})
    with pytest.raises(DomainError):
        analyze(model)


@pytest.mark.parametrize('n,milnor,expected', [
    (3, [], [1, 0, 1, 0]),
    (3, [1, 2], [1, 0, 1, 3]),
    (2, [], [1, 0, 1]),
    (2, [4], [1, 0, 5]),
])
def test_betti_isolated(n, milnor, expected):
    groups = betti_isolated(n, milnor)
    assert [groups[q].rank for q in range(n + 1)] == expected
    assert groups[1] == TRIVIAL


@pytest.mark.parametrize('n,milnor', [(4, [1]), (3, [INFINITE]), (3, [-1])])
def test_betti_isolated_rejects(n, milnor):
    with pytest.raises(DomainError):
        betti_isolated(n, milnor)


def test_consistency_checks_flag_extra_vertical_cycle():
    groups = {0: INTEGERS, 1: TRIVIAL, 2: AbelianGroup.free(2), 3: AbelianGroup.free(5)}
    report = HomologyReport(dimension=3, classification=LINE_QUADRATIC, homology=groups,
                            vertical_rank=1, euler=-2)
    failed = {c.name for c in consistency_checks(report) if not c.passed}
    assert failed == {'h2_vertical_only', 'euler_identity'}


def test_consistency_checks_surface_euler_identity_is_vacuous():
    groups = {0: INTEGERS, 1: TRIVIAL, 2: AbelianGroup.free(3)}
    report = HomologyReport(dimension=2, classification=ISOLATED_TJURINA, homology=groups,
                            vertical_rank=1, euler=4)
    checks = {c.name: c for c in consistency_checks(report)}
    assert checks['euler_identity'].passed
    assert checks['euler_identity'].detail == 'stated for threefolds only'
    assert checks['euler_from_betti'].passed


def test_unsupported_report_keeps_guaranteed_facts(monkeypatch, threefold_model):
    import detvan.pipeline as pipeline

    monkeypatch.setattr(pipeline, '_singular_dimensions', lambda charts, max_degree: [2, 2])
    report = analyze(threefold_model, seed=1, check_isolated=False)
    assert report.classification == UNSUPPORTED
    assert not report.supported
    assert report.betti == [1, 0, 1, None]
    assert report.euler == '2-b3'
    doc = report.to_dict()
    assert doc['homology'][3] == {'degree': 3, 'rank': None, 'torsion': None}
    assert 'dimension 2' in doc['reason']
    assert all(check.passed for check in report.checks)


def test_sweep_sequential(cone_model):
    result = sweep(cone_model, [1, 2, 2, 3], workers=1, progress=False)
    assert sorted(result.reports) == [1, 2, 3]
    assert result.seed_independent
    doc = result.to_dict()
    assert list(doc['reports']) == ['1', '2', '3']


def test_sweep_needs_seeds(cone_model):
    with pytest.raises(DomainError):
        sweep(cone_model, [], workers=1, progress=False)
