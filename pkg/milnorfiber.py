# detvan
# Milnor-fibre homology of ICMC2 singularities given by 3x2 polynomial
# matrices: command-line tools and the HTTP analysis service.

import os
import sys

from detvan import DB_PATH, SERVICE_FEATURES_ENABLED, URL_PREFIX, __version__
from detvan.cli import LOG_LEVEL, SEED, Colors, run_cli
from detvan.idealalg import MAX_DEGREE
from detvan.pipeline import MAX_PARALLEL_WORKERS, MAX_RESEEDS
from detvan.scheduler import REPORT_RETENTION_HOURS


# ============================================================================
# CONFIGURATION GUIDE
# ============================================================================
#
# All settings check for environment variables first. If an environment
# variable is set, its value is used. Otherwise, the fallback default is used.
#
# Example: os.environ.get('DETVAN_MAX_DEGREE', 24)
#
# Set environment variables before running:
#   export DETVAN_SEED=7
#   export DETVAN_MAX_DEGREE=30
#   python milnorfiber.py
#
# Or use start_detvan.sh which exports them for you.
#
# With arguments the launcher behaves like the `detvan` command:
#   python milnorfiber.py analyze data/models/seven_point_threefold.json
#   python milnorfiber.py milnor "x^3+y^3+z^3" --vars x,y,z
#
# ============================================================================

SERVER_PORT = int(os.environ.get('SERVER_PORT', os.environ.get('PORT', 8190)))


def print_configuration():
    """Prints the current configuration in a neat, aligned table."""
    print(f"\n{Colors.HEADER}{Colors.BOLD}--- CURRENT CONFIGURATION ---{Colors.RESET}")

    def print_row(key, value, is_path=False):
        color = Colors.CYAN if is_path else Colors.GREEN
        print(f" {Colors.BOLD}{key:<25}{Colors.RESET} : {color}{value}{Colors.RESET}")

    print_row("Server Port", SERVER_PORT)
    print_row("Report Cache", DB_PATH, True)
    print_row("Service Enabled", SERVICE_FEATURES_ENABLED)
    print_row("Report Retention", f"{REPORT_RETENTION_HOURS} hours")
    print_row("Default Seed", SEED)
    print_row("Degree Budget", MAX_DEGREE)
    print_row("Reseed Cap", MAX_RESEEDS)
    print_row("Max Parallel Workers", MAX_PARALLEL_WORKERS if MAX_PARALLEL_WORKERS else "All Cores")
    print_row("Log Level", LOG_LEVEL)
    print(f"{Colors.HEADER}-----------------------------{Colors.RESET}\n")


def print_startup_banner():
    banner = rf"""
{Colors.GREEN}{Colors.BOLD}      _      _
   __| | ___| |___   ____ _ _ __
  / _` |/ _ \ __\ \ / / _` | '_ \
 | (_| |  __/ |_ \ V / (_| | | | |
  \__,_|\___|\__| \_/ \__,_|_| |_|{Colors.RESET}
    """
    print(banner)
    print(f"   {Colors.BOLD}Milnor fibres of determinantal singularities{Colors.RESET}")
    print(f"   Version    : {Colors.YELLOW}{__version__}{Colors.RESET}")
    print("")


if __name__ == '__main__':
    if len(sys.argv) > 1:
        sys.exit(run_cli(sys.argv[1:]))

    print_startup_banner()
    print_configuration()

    if not SERVICE_FEATURES_ENABLED:
        print(f"{Colors.YELLOW}{Colors.BOLD}WARNING: SERVICE_FEATURES_ENABLED is false; nothing to serve.{Colors.RESET}")
        print(f"{Colors.YELLOW}   > Use the command-line tools instead, e.g. `python milnorfiber.py analyze model.json`{Colors.RESET}")
        sys.exit(1)

    print(f"👉 API root: {Colors.CYAN}{Colors.BOLD}http://127.0.0.1:{SERVER_PORT}{URL_PREFIX}/{Colors.RESET}")
    sys.exit(run_cli(['serve', '--port', str(SERVER_PORT)]))
