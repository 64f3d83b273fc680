"""
Command-line front end.

    detvan analyze model.json [--seed N] [--max-degree D] [--format json|text] [--out PATH]
    detvan tjurina model.json
    detvan milnor "x^3+y^3+z^3" --vars x,y,z [--global]
    detvan snf matrix.json
    detvan sweep model.json --seeds 1,2,3 [--workers K]
    detvan serve [--port P]

Exit codes: 0 success, 2 unsupported classification, 1 any error.
"""

import argparse
import json
import logging
import os
import sys

from detvan import __version__
from detvan.errors import DetvanError

logger = logging.getLogger(__name__)

# Default seed for every generic choice (CLI and service)
SEED = int(os.environ.get('DETVAN_SEED', 1))

LOG_LEVEL = os.environ.get('DETVAN_LOG_LEVEL', 'WARNING').upper()

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSUPPORTED = 2


class Colors:
    HEADER = '\033[95m'
    BLUE = '\033[94m'
    CYAN = '\033[96m'
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    RED = '\033[91m'
    RESET = '\033[0m'
    BOLD = '\033[1m'


def _comma_list(value):
    items = [item.strip() for item in value.split(',') if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def _seed_list(value):
    try:
        return [int(item) for item in _comma_list(value)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be integers, got {value!r}")


def _nat(value):
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {value}")
    return number


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help=f"seed for generic choices (default: model option, else {SEED})")
    common.add_argument('--max-degree', type=_nat, default=None, help="degree budget for standard bases")
    common.add_argument('--format', choices=['json', 'text'], default='json', help="output format")
    common.add_argument('--out', default=None, help="write output to this file instead of stdout")
    common.add_argument('-v', '--verbose', action='count', default=0, help="-v for INFO, -vv for DEBUG")

    parser = argparse.ArgumentParser(
        prog='detvan',
        description="Milnor-fibre homology of ICMC2 singularities given by 3x2 matrices.",
    )
    parser.add_argument('--version', action='version', version=f"detvan {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', parents=[common], help="classify a model and compute its homology")
    p.add_argument('model', help="model JSON file")

    p = sub.add_parser('tjurina', parents=[common], help="show both charts of the Tjurina transform")
    p.add_argument('model', help="model JSON file")

    p = sub.add_parser('milnor', parents=[common], help="Milnor number of a hypersurface")
    p.add_argument('expr', help='polynomial, e.g. "x^3+y^3+z^3"')
    p.add_argument('--vars', type=_comma_list, required=True, help="comma-separated variable list")
    p.add_argument('--global', dest='global_', action='store_true',
                   help="sum over all critical points instead of the germ at the origin")

    p = sub.add_parser('snf', parents=[common], help="Smith normal form of an integer matrix")
    p.add_argument('matrix', help="JSON file with a list of integer rows")

    p = sub.add_parser('sweep', parents=[common], help="analyze over several seeds")
    p.add_argument('model', help="model JSON file")
    p.add_argument('--seeds', type=_seed_list, default=[1, 2, 3, 4, 5], help="comma-separated seeds")
    p.add_argument('--workers', type=int, default=None, help="process pool size (default: all cores)")

    p = sub.add_parser('serve', parents=[common], help="run the HTTP analysis service")
    p.add_argument('--host', default='0.0.0.0')
    p.add_argument('--port', type=int, default=int(os.environ.get('SERVER_PORT', os.environ.get('PORT', 8190))))
    return parser


def configure_logging(verbosity):
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s', force=True)


def _emit(text, out):
    if out:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _json_text(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + '\n'


def render_report_text(doc, color=False):
    """Aligned summary table of a report dict."""
    c = Colors if color else type('Plain', (), {k: '' for k in vars(Colors) if k.isupper()})
    lines = [f"{c.HEADER}{c.BOLD}--- MILNOR FIBRE HOMOLOGY ---{c.RESET}"]

    def row(key, value, highlight=None):
        lines.append(f" {c.BOLD}{key:<20}{c.RESET} : {highlight or c.GREEN}{value}{c.RESET}")

    status = c.RED if doc['classification'] == 'unsupported' else c.GREEN
    row("Classification", doc['classification'], status)
    row("Dimension", doc['dimension'])
    row("Betti numbers", ', '.join('?' if b is None else str(b) for b in doc['betti']))
    row("Euler characteristic", doc['euler'])
    row("Vertical rank", doc['vertical_rank'])
    for entry in doc['special_points']:
        row("Special points", f"{entry['minpoly']} ({entry['degree']} x {entry['class']})", c.CYAN)
    if doc.get('axis'):
        row("Axis", doc['axis']['class'], c.CYAN)
    if doc.get('affine_betti'):
        row("Affine part", ', '.join(str(b) for b in doc['affine_betti']))
    if doc.get('reason'):
        row("Reason", doc['reason'], c.YELLOW)
    failed = [check['name'] for check in doc['checks'] if not check['passed']]
    row("Checks", 'all passed' if not failed else f"FAILED: {', '.join(failed)}",
        c.RED if failed else c.GREEN)
    lines.append(f"{c.HEADER}------------------------------{c.RESET}")
    return '\n'.join(lines) + '\n'


def _cmd_analyze(args):
    from detvan.exprparse import load_model
    from detvan.pipeline import analyze

    model = load_model(args.model)
    seed = args.seed if args.seed is not None else model.options.get('seed', SEED)
    report = analyze(model, seed=seed, max_degree=args.max_degree)
    doc = report.to_dict()
    if args.format == 'text':
        _emit(render_report_text(doc, color=args.out is None and sys.stdout.isatty()), args.out)
    else:
        _emit(_json_text(doc), args.out)
    return EXIT_UNSUPPORTED if not report.supported else EXIT_OK


def _cmd_tjurina(args):
    from detvan.detmodel import chart_report
    from detvan.exprparse import load_model

    doc = chart_report(load_model(args.model), args.max_degree)
    if args.format == 'text':
        lines = []
        for chart in doc['charts']:
            lines.append(f"chart {chart['index']} ({chart['coordinate']}):")
            lines.extend(f"  {e} = 0" for e in chart['equations'])
            if 'hypersurface' in chart:
                lines.append(f"  h = {chart['hypersurface']}")
        _emit('\n'.join(lines) + '\n', args.out)
    else:
        _emit(_json_text(doc), args.out)
    return EXIT_OK


def _cmd_milnor(args):
    from detvan.exprparse import parse_poly
    from detvan.idealalg import INFINITE, milnor_hypersurface

    f = parse_poly(args.expr, args.vars)
    mu = milnor_hypersurface(f, at_origin=not args.global_, max_degree=args.max_degree)
    value = 'infinite' if mu == INFINITE else int(mu)
    if args.format == 'text':
        _emit(f"{value}\n", args.out)
    else:
        _emit(_json_text({'milnor': value}), args.out)
    return EXIT_OK


def _cmd_snf(args):
    from detvan.abelian import IntMatrix, diagonal, smith_normal_form
    from detvan.exprparse import parse_int_matrix

    with open(args.matrix, 'rb') as f:
        rows = parse_int_matrix(f.read())
    M = IntMatrix.from_rows(rows)
    U, S, V = smith_normal_form(M)
    doc = {'U': U.tolist(), 'S': S.tolist(), 'V': V.tolist(), 'diagonal': diagonal(S)}
    if args.format == 'text':
        _emit('\n'.join(' '.join(f"{e:>4}" for e in row) for row in S.tolist()) + '\n', args.out)
    else:
        _emit(_json_text(doc), args.out)
    return EXIT_OK


def _cmd_sweep(args):
    from detvan.exprparse import load_model
    from detvan.pipeline import sweep

    model = load_model(args.model)
    result = sweep(model, args.seeds, workers=args.workers, max_degree=args.max_degree,
                   progress=sys.stderr.isatty())
    doc = result.to_dict()
    if args.format == 'text':
        verdict = 'seed-independent' if result.seed_independent else 'DIFFERS between seeds'
        _emit(f"seeds {args.seeds}: homology {verdict}\n", args.out)
    else:
        _emit(_json_text(doc), args.out)
    return EXIT_OK if result.seed_independent else EXIT_ERROR


def _cmd_serve(args):
    from detvan import create_app
    from detvan.scheduler import shutdown_scheduler

    app = create_app()
    print(f"{Colors.GREEN}{Colors.BOLD}detvan service started{Colors.RESET}")
    print(f"👉 Access URL: {Colors.CYAN}{Colors.BOLD}http://127.0.0.1:{args.port}/detvan/api/health{Colors.RESET}")
    print("   (Press CTRL+C to stop)")
    try:
        app.run(host=args.host, port=args.port, debug=False, threaded=True)
    finally:
        shutdown_scheduler()
    return EXIT_OK


COMMANDS = {
    'analyze': _cmd_analyze,
    'tjurina': _cmd_tjurina,
    'milnor': _cmd_milnor,
    'snf': _cmd_snf,
    'sweep': _cmd_sweep,
    'serve': _cmd_serve,
}


def run_cli(argv=None):
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse uses 2 for usage errors, which is reserved for unsupported reports
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (DetvanError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
