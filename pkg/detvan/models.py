"""
Report cache for the analysis service.

Reports are stored as canonical JSON keyed by the sha256 of the canonical
model text, the seed and the degree budget. Schema versioning lives in a
detvan_meta table.
"""

import hashlib
import json
import sqlite3
import time

REPORT_SCHEMA_VERSION = 2

_CREATE_TABLES_SQL = """
CREATE TABLE IF NOT EXISTS detvan_meta (
    key TEXT PRIMARY KEY,
    value TEXT
);

CREATE TABLE IF NOT EXISTS reports (
    id TEXT PRIMARY KEY,
    model TEXT NOT NULL,
    seed INTEGER NOT NULL,
    max_degree INTEGER,
    classification TEXT NOT NULL,
    report TEXT NOT NULL,
    created_at REAL NOT NULL,
    hits INTEGER NOT NULL DEFAULT 0
);

CREATE INDEX IF NOT EXISTS idx_reports_created_at ON reports(created_at);
"""


def get_report_db(db_path):
    """Open the sqlite report cache in WAL mode, rows addressable by column name."""
    conn = sqlite3.connect(db_path)
    conn.row_factory = sqlite3.Row
    conn.execute("PRAGMA journal_mode=WAL")
    conn.execute("PRAGMA foreign_keys=ON")
    return conn


def create_report_tables(db_path):
    """Create the reports table and its detvan_meta schema record.

    Caches written by an older REPORT_SCHEMA_VERSION are migrated in place.
    """
    conn = get_report_db(db_path)
    try:
        conn.executescript(_CREATE_TABLES_SQL)
        conn.commit()

        try:
            row = conn.execute(
                "SELECT value FROM detvan_meta WHERE key = 'schema_version'"
            ).fetchone()
            stored_version = int(row['value']) if row else 0
        except sqlite3.OperationalError:
            stored_version = 0

        if stored_version < REPORT_SCHEMA_VERSION:
            _run_migrations(conn, stored_version, REPORT_SCHEMA_VERSION)
            conn.execute(
                "INSERT OR REPLACE INTO detvan_meta (key, value) VALUES ('schema_version', ?)",
                (str(REPORT_SCHEMA_VERSION),)
            )
            conn.commit()
    finally:
        conn.close()


def _run_migrations(conn, from_version, to_version):
    """Run incremental schema migrations."""
    if from_version < 2:
        # Version 1 caches had no hit counter
        try:
            conn.execute("ALTER TABLE reports ADD COLUMN hits INTEGER NOT NULL DEFAULT 0")
        except sqlite3.OperationalError:
            pass  # Column might already exist
        conn.commit()


def report_key(model_text, seed, max_degree=None):
    payload = json.dumps([model_text, seed, max_degree], sort_keys=True)
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def get_cached_report(db_path, report_id):
    """Cached report dict, or None."""
    conn = get_report_db(db_path)
    try:
        row = conn.execute("SELECT report FROM reports WHERE id = ?", (report_id,)).fetchone()
        if row is None:
            return None
        conn.execute("UPDATE reports SET hits = hits + 1 WHERE id = ?", (report_id,))
        conn.commit()
        return json.loads(row['report'])
    finally:
        conn.close()


def store_report(db_path, report_id, model_text, seed, max_degree, report):
    conn = get_report_db(db_path)
    try:
        conn.execute(
            "INSERT OR REPLACE INTO reports (id, model, seed, max_degree, classification, report, created_at) "
            "VALUES (?, ?, ?, ?, ?, ?, ?)",
            (report_id, model_text, seed, max_degree, report['classification'],
             json.dumps(report, sort_keys=True), time.time())
        )
        conn.commit()
    finally:
        conn.close()


def prune_reports(db_path, older_than):
    """Delete reports created before the ``older_than`` timestamp. Returns the count."""
    conn = get_report_db(db_path)
    try:
        cursor = conn.execute("DELETE FROM reports WHERE created_at < ?", (older_than,))
        conn.commit()
        return cursor.rowcount
    finally:
        conn.close()
