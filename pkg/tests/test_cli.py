import json

import pytest

from conftest import data_path
from detvan.cli import EXIT_ERROR, EXIT_OK, EXIT_UNSUPPORTED, build_parser, render_report_text, run_cli


def test_analyze_cone_json(capsys):
    code = run_cli(['analyze', data_path('models', 'rational_normal_cone.json')])
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc['classification'] == 'smooth_transform'
    assert doc['betti'] == [1, 0, 1]


def test_analyze_text_to_file(tmp_path):
    out = tmp_path / 'report.txt'
    code = run_cli(['analyze', data_path('models', 'rational_normal_cone.json'),
                    '--format', 'text', '--out', str(out)])
    assert code == EXIT_OK
    text = out.read_text()
    assert 'smooth_transform' in text
    assert '\033[' not in text


def test_unsupported_exit_code(monkeypatch, capsys):
    import detvan.pipeline as pipeline

    monkeypatch.setattr(pipeline, '_singular_dimensions', lambda charts, max_degree: [3, 3])
    code = run_cli(['analyze', data_path('models', 'rational_normal_cone.json')])
    assert code == EXIT_UNSUPPORTED
    doc = json.loads(capsys.readouterr().out)
    assert doc['classification'] == 'unsupported'
    assert doc['betti'] == [1, 0, None]
    assert doc['euler'] == '1+b2'


def test_milnor(capsys):
    assert run_cli(['milnor', 'x^3+y^3+z^3', '--vars', 'x,y,z']) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {'milnor': 8}


def test_milnor_non_isolated(capsys):
    assert run_cli(['milnor', 'x^2', '--vars', 'x,y', '--format', 'text']) == EXIT_OK
    assert capsys.readouterr().out == 'infinite\n'


def test_snf(capsys):
    assert run_cli(['snf', data_path('matrices', 'snf_example.json')]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc['S'] == [[1, 0], [0, 6]]
    assert doc['diagonal'] == [1, 6]


def test_tjurina_text(capsys):
    assert run_cli(['tjurina', data_path('models', 'seven_point_threefold.json'), '--format', 'text']) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('chart 0 (s):')
    assert 'chart 1 (t):' in out


@pytest.mark.parametrize('argv', [
    ['analyze'],
    ['frobnicate'],
    ['milnor', 'x^2'],
    ['sweep', 'model.json', '--seeds', 'a,b'],
])
def test_usage_errors(argv, capsys):
    assert run_cli(argv) == EXIT_ERROR


def test_missing_file(capsys):
    assert run_cli(['analyze', 'no/such/model.json']) == EXIT_ERROR
    assert capsys.readouterr().err.startswith('ERROR:')


def test_parse_error_is_reported(capsys):
    assert run_cli(['milnor', 'x^^2', '--vars', 'x']) == EXIT_ERROR
    assert 'ERROR:' in capsys.readouterr().err


def test_sweep_sequential(capsys):
    code = run_cli(['sweep', data_path('models', 'rational_normal_cone.json'), '--seeds', '1,2', '--workers', '1'])
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc['seed_independent'] is True
    assert sorted(doc['reports']) == ['1', '2']


def test_version(capsys):
    assert run_cli(['--version']) == EXIT_OK
    assert capsys.readouterr().out.startswith('detvan ')


def test_parser_defaults():
    args = build_parser().parse_args(['analyze', 'model.json'])
    assert args.format == 'json'
    assert args.seed is None
    assert args.verbose == 0


def test_render_report_text_marks_failures():
    doc = {
        'classification': 'line_quadratic', 'dimension': 3, 'betti': [1, 0, 2, 14], 'euler': -11,
        'vertical_rank': 1, 'special_points': [], 'axis': None, 'affine_betti': None,
        'checks': [{'name': 'h2_vertical_only', 'passed': False}],
    }
    text = render_report_text(doc)
    assert 'FAILED: h2_vertical_only' in text
    assert '1, 0, 2, 14' in text


def test_serve_stops_the_scheduler(monkeypatch, tmp_path):
    import flask

    import detvan
    from detvan import scheduler

    monkeypatch.setattr(detvan, 'DB_PATH', str(tmp_path / 'reports.sqlite'))
    monkeypatch.setattr(flask.Flask, 'run', lambda self, **kwargs: None)
    assert run_cli(['serve', '--port', '5099']) == EXIT_OK
    assert scheduler._scheduler is None


@pytest.mark.parametrize('name,reason', [
    ('irrational_points.json', 'irrational roots of s^2-2'),
    ('quadratic_entries.json', 'does not reduce to a hypersurface'),
    ('nonreduced_discriminant.json', None),
])
def test_models_outside_the_closed_forms_exit_unsupported(name, reason, capsys):
    code = run_cli(['analyze', data_path('models', name)])
    assert code == EXIT_UNSUPPORTED
    doc = json.loads(capsys.readouterr().out)
    assert doc['classification'] == 'unsupported'
    assert doc['betti'][0] == 1
    if reason is not None:
        assert reason in doc['reason']
