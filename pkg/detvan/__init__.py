"""
detvan: Milnor-fiber homology of ICMC2 singularities given by 3x2 matrices.

The computational core lives in the submodules (polycore, exprparse, idealalg,
abelian, detmodel, pipeline). This package object also provides the optional
HTTP service: a Flask Blueprint exposing the analysis operations, backed by a
sqlite report cache and a background maintenance job.
"""

import os

from flask import Blueprint, Flask

__version__ = '1.2.1'

SERVICE_FEATURES_ENABLED = os.environ.get('SERVICE_FEATURES_ENABLED', 'true').lower() == 'true'

# Path to the sqlite file holding cached reports.
DB_PATH = os.environ.get('DETVAN_DB_PATH', os.path.join('.detvan_cache', 'reports.sqlite'))

URL_PREFIX = '/detvan/api'


def init_service(app, db_path, start_scheduler=True):
    """Initialize the analysis service: create tables, register routes, start maintenance."""
    if not SERVICE_FEATURES_ENABLED:
        return False

    from detvan.models import create_report_tables
    from detvan.routes import register_routes
    from detvan.scheduler import init_scheduler

    db_dir = os.path.dirname(db_path)
    if db_dir:
        os.makedirs(db_dir, exist_ok=True)

    create_report_tables(db_path)

    # One blueprint per app: routes close over this app's database.
    service_bp = Blueprint('detvan', __name__, url_prefix=URL_PREFIX)
    register_routes(service_bp, db_path)
    app.register_blueprint(service_bp)

    if start_scheduler:
        init_scheduler(db_path)

    return True


def create_app(db_path=None, start_scheduler=True):
    """Build the Flask application serving the analysis API."""
    app = Flask(__name__)
    init_service(app, db_path or DB_PATH, start_scheduler=start_scheduler)
    return app
