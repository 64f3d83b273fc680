"""
Background maintenance for the report cache.

Uses APScheduler BackgroundScheduler running in-process.
"""

import logging
import os
import time

from apscheduler.schedulers.background import BackgroundScheduler

from detvan.models import prune_reports

logger = logging.getLogger(__name__)

_scheduler = None
_db_path = None

# Cached reports older than this are pruned (default: one week)
REPORT_RETENTION_HOURS = int(os.environ.get('REPORT_RETENTION_HOURS', '168'))


def init_scheduler(db_path):
    """Start the background scheduler with the cache pruning job."""
    global _scheduler, _db_path
    _db_path = db_path
    if _scheduler:
        return

    _scheduler = BackgroundScheduler(daemon=True)
    _scheduler.add_job(_prune_expired_reports, 'interval', hours=1, id='prune_reports',
                       misfire_grace_time=300)
    _scheduler.start()
    logger.info(f"Report pruning scheduled (retention {REPORT_RETENTION_HOURS} hours)")


def shutdown_scheduler():
    """Shut down the scheduler gracefully."""
    global _scheduler
    if _scheduler:
        _scheduler.shutdown(wait=False)
        _scheduler = None


def _prune_expired_reports():
    """Delete cached reports past the retention window."""
    if not _db_path:
        return
    cutoff = time.time() - REPORT_RETENTION_HOURS * 60 * 60
    try:
        removed = prune_reports(_db_path, cutoff)
        if removed:
            logger.info(f"Pruned {removed} cached reports")
    except Exception as e:
        logger.error(f"Report pruning failed: {e}")
