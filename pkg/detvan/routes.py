"""
HTTP routes of the analysis service.

All endpoints take and return JSON. Errors come back as {'error': message}
with status 400 for invalid input and 422 when a resource limit stops the
computation.
"""

import logging

from flask import jsonify, request

from detvan import __version__
from detvan.errors import DomainError, ResourceLimitError, StructuralError
from detvan.models import get_cached_report, report_key, store_report

logger = logging.getLogger(__name__)


def _json_body():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise StructuralError("request body must be a JSON object")
    return data


def _optional_int(data, key):
    value = data.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise StructuralError(f"'{key}' must be an integer")
    return value


def register_routes(bp, db_path):
    """Register the analysis routes on the given Blueprint."""

    @bp.errorhandler(StructuralError)
    @bp.errorhandler(DomainError)
    def invalid_input(e):
        return jsonify({'error': str(e)}), 400

    @bp.errorhandler(ResourceLimitError)
    def resource_limit(e):
        return jsonify({'error': str(e)}), 422

    @bp.route('/health')
    def health():
        return jsonify({'status': 'ok', 'version': __version__})

    @bp.route('/analyze', methods=['POST'])
    def analyze_model():
        """Analyze a model; identical requests are served from the cache."""
        from detvan.cli import SEED
        from detvan.exprparse import dump_model, parse_model
        from detvan.pipeline import analyze

        data = _json_body()
        model = parse_model(data)
        seed = _optional_int(data, 'seed')
        if seed is None:
            seed = model.options.get('seed', SEED)
        max_degree = _optional_int(data, 'max_degree')

        model_text = dump_model(model)
        report_id = report_key(model_text, seed, max_degree)
        cached = get_cached_report(db_path, report_id)
        if cached is not None:
            return jsonify({'report_id': report_id, 'cached': True, 'report': cached})

        report = analyze(model, seed=seed, max_degree=max_degree).to_dict()
        store_report(db_path, report_id, model_text, seed, max_degree, report)
        logger.info(f"Stored report {report_id[:12]} ({report['classification']})")
        return jsonify({'report_id': report_id, 'cached': False, 'report': report})

    @bp.route('/reports/<report_id>')
    def get_report(report_id):
        report = get_cached_report(db_path, report_id)
        if report is None:
            return jsonify({'error': 'Report not found'}), 404
        return jsonify({'report_id': report_id, 'report': report})

    @bp.route('/tjurina', methods=['POST'])
    def tjurina():
        from detvan.detmodel import chart_report
        from detvan.exprparse import parse_model

        data = _json_body()
        return jsonify(chart_report(parse_model(data), _optional_int(data, 'max_degree')))

    @bp.route('/milnor', methods=['POST'])
    def milnor():
        from detvan.exprparse import parse_poly
        from detvan.idealalg import INFINITE, milnor_hypersurface

        data = _json_body()
        expr = data.get('expr')
        names = data.get('vars')
        if not isinstance(expr, str) or not expr.strip():
            return jsonify({'error': "'expr' is required"}), 400
        if not isinstance(names, list) or not names:
            return jsonify({'error': "'vars' must be a nonempty list"}), 400
        f = parse_poly(expr, names)
        at_origin = not data.get('global', False)
        mu = milnor_hypersurface(f, at_origin=at_origin, max_degree=_optional_int(data, 'max_degree'))
        return jsonify({'milnor': 'infinite' if mu == INFINITE else int(mu)})

    @bp.route('/snf', methods=['POST'])
    def snf():
        from detvan.abelian import IntMatrix, diagonal, smith_normal_form
        from detvan.exprparse import parse_int_matrix

        rows = parse_int_matrix(_json_body())
        U, S, V = smith_normal_form(IntMatrix.from_rows(rows))
        return jsonify({'U': U.tolist(), 'S': S.tolist(), 'V': V.tolist(), 'diagonal': diagonal(S)})
