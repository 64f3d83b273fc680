"""
Classification and Milnor-fibre homology of a determinantal model.

``analyze`` walks the decision tree: validate the model, build both charts of
the Tjurina transform, look at the singular locus of the transform along the
exceptional line V and then take one of three routes:

    smooth_transform  no singular point near V, closed form with r = 0
    isolated_tjurina  finitely many isolated points on V, r = sum of Milnor numbers
    line_quadratic    V is a line of transversal A_1 points degenerating at
                      finitely many special points; the answer is assembled
                      from a generic rank-1 perturbation

Everything a route cannot handle becomes an ``unsupported`` report carrying
only the facts that hold for every ICMC2 Milnor fibre.
"""

import concurrent.futures
import logging
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from tqdm import tqdm

from detvan.abelian import (
    INTEGERS, TRIVIAL, AbelianGroup, BoundaryPiece, IntMatrix, Unsupported,
    assemble_rank1_homology, guaranteed_facts, wang_homology,
)
from detvan.detmodel import (
    NotQuadratic, NotReducible, SpecialPointClass, classify_axis,
    generic_rank1_perturbation, quadratic_family, reduce_to_hypersurface, special_points,
    tjurina_chart, validate_model, ystar_reduction,
)
from detvan.errors import DomainError, ReseedRequired, ResourceLimitError
from detvan.idealalg import (
    INFINITE, ideal_dimension, milnor_hypersurface, milnor_icis_le_greuel,
    polar_curve, radical_contains, singular_locus_ideal,
)
from detvan.polycore import (
    gcd_uni, gen, rational, render, specialize, substitute, to_fraction, variable_names,
)

logger = logging.getLogger(__name__)

# Cap on seeded attempts for the perturbation and the polar bend
MAX_RESEEDS = int(os.environ.get('DETVAN_MAX_RESEEDS', 32))

# Process pool size for seed sweeps; empty means all cores
MAX_PARALLEL_WORKERS = os.environ.get('MAX_PARALLEL_WORKERS', None)
if MAX_PARALLEL_WORKERS is not None and MAX_PARALLEL_WORKERS != "":
    MAX_PARALLEL_WORKERS = int(MAX_PARALLEL_WORKERS)
else:
    MAX_PARALLEL_WORKERS = None

SMOOTH_TRANSFORM = 'smooth_transform'
ISOLATED_TJURINA = 'isolated_tjurina'
LINE_QUADRATIC = 'line_quadratic'
UNSUPPORTED = 'unsupported'

ASSUMPTIONS = (
    'Milnor-ball radii are taken as satisfied by construction for polynomial input',
    'homology of the perturbed transform transfers to the Milnor fibre by the two-parameter '
    '(delta, epsilon) smoothing; the residual singularity at the axis is locally highly '
    'connected, so degrees up to 2 are unaffected',
)

# keys that must agree between seeds; trace, seed, reseeds and checks may differ
SEED_INDEPENDENT_KEYS = (
    'classification', 'dimension', 'betti', 'homology', 'vertical_rank', 'euler',
    'special_points', 'axis', 'transversal', 'affine_betti',
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    anchor: str
    detail: str = ''

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed, 'anchor': self.anchor, 'detail': self.detail}


@dataclass
class HomologyReport:
    """Result of ``analyze``.

    ``homology`` maps each degree 0..n to an AbelianGroup, or to None when the
    group is not determined. Degrees in ``torsion_unknown`` have a known rank
    but undetermined torsion.
    """

    dimension: int
    classification: str
    homology: dict
    vertical_rank: int
    euler: object = None
    special_points: list = field(default_factory=list)
    axis: dict = None
    trace: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    seed: int = 1
    reseeds: int = 0
    transversal: dict = None
    affine_betti: list = None
    assumptions: list = field(default_factory=lambda: list(ASSUMPTIONS))
    validation: dict = None
    reason: str = None
    torsion_unknown: tuple = ()

    @property
    def betti(self):
        return [None if self.homology.get(q) is None else self.homology[q].rank
                for q in range(self.dimension + 1)]

    @property
    def supported(self):
        return self.classification != UNSUPPORTED

    def homology_entries(self):
        entries = []
        for q in range(self.dimension + 1):
            group = self.homology.get(q)
            if group is None:
                entries.append({'degree': q, 'rank': None, 'torsion': None})
            else:
                torsion = None if q in self.torsion_unknown else list(group.torsion)
                entries.append({'degree': q, 'rank': group.rank, 'torsion': torsion})
        return entries

    def to_dict(self):
        doc = {
            'classification': self.classification,
            'dimension': self.dimension,
            'betti': self.betti,
            'homology': self.homology_entries(),
            'vertical_rank': self.vertical_rank,
            'euler': self.euler,
            'special_points': self.special_points,
            'axis': self.axis,
            'checks': [c.to_dict() for c in self.checks],
            'trace': self.trace,
            'seed': self.seed,
            'reseeds': self.reseeds,
            'transversal': self.transversal,
            'affine_betti': self.affine_betti,
            'assumptions': list(self.assumptions),
            'validation': self.validation,
        }
        if self.reason is not None:
            doc['reason'] = self.reason
        return dict(sorted(doc.items()))


def _euler(groups, n):
    ranks = [groups.get(q) for q in range(n + 1)]
    if any(g is None for g in ranks):
        return None
    return sum((-1) ** q * g.rank for q, g in enumerate(ranks))


def betti_isolated(n, milnor_numbers):
    """Homology of the Milnor fibre when the transform has only isolated singularities.

    n = 3: H = (Z, 0, Z, Z^r); n = 2: H = (Z, 0, Z^r + Z), with r the sum of
    the Milnor numbers.
    """
    if n not in (2, 3):
        raise DomainError(f"closed form is known for n in {{2, 3}}, got {n}")
    if any(mu == INFINITE or mu < 0 for mu in milnor_numbers):
        raise DomainError(f"Milnor numbers must be finite and nonnegative, got {list(milnor_numbers)}")
    r = sum(int(mu) for mu in milnor_numbers)
    groups = {0: INTEGERS, 1: TRIVIAL}
    if n == 3:
        groups[2] = INTEGERS
        groups[3] = AbelianGroup.free(r)
    else:
        groups[2] = AbelianGroup.free(r).direct_sum(INTEGERS)
    return groups


def _unsupported_report(n, reason, stage, seed, trace, validation=None, **extra):
    facts = guaranteed_facts(n)
    groups = {q: None for q in range(n + 1)}
    for q, b in enumerate(facts['betti']):
        if b is not None:
            groups[q] = AbelianGroup.free(b)
    logger.warning(f"Unsupported at stage '{stage}': {reason}")
    trace.append({'stage': stage, 'result': 'unsupported', 'reason': reason})
    report = HomologyReport(
        dimension=n,
        classification=UNSUPPORTED,
        homology=groups,
        vertical_rank=facts['vertical_rank'],
        euler='2-b3' if n == 3 else '1+b2',
        trace=trace,
        seed=seed,
        validation=validation,
        reason=reason,
        torsion_unknown=(1,) if n == 2 else (),
        **extra,
    )
    report.checks = consistency_checks(report)
    return report


def _chart_system(chart):
    """(equations, expected codimension, variables vanishing on V) of a chart."""
    if chart.is_reduced:
        return [chart.hypersurface], 1, chart.transversal_variables
    return list(chart.equations), 3, chart.model_variables


def _on_v(ideal, zero_vars):
    ring = ideal.ring
    return ideal.extend([gen(ring, v) for v in zero_vars])


def transversal_milnor_number(chart, value, max_degree=None):
    """Milnor number of the slice of a reduced chart at coordinate = ``value``."""
    if not chart.is_reduced:
        raise DomainError(f"chart {chart.index} is not reduced to a hypersurface")
    h = specialize(chart.hypersurface, {chart.coordinate: value})
    return milnor_hypersurface(h, at_origin=True, max_degree=max_degree)


def _nonzero_root_count(classes, param_ring):
    x = param_ring.gens[0]
    total = 0
    for c in classes:
        total += c.degree
        if c.minpoly.rem(x) == 0:
            total -= 1
    return total


def chart_point_cross_check(chart0_classes, chart1_classes):
    """Points of P^1 with s != 0 seen in chart 0 must match those with t != 0 in chart 1."""
    counts = []
    for classes in (chart0_classes, chart1_classes):
        if classes:
            counts.append(_nonzero_root_count(classes, classes[0].minpoly.ring))
        else:
            counts.append(0)
    passed = counts[0] == counts[1]
    return CheckResult(
        name='chart_point_cross_check',
        passed=passed,
        anchor='special points away from both chart origins are seen by both charts',
        detail=f"chart 0 sees {counts[0]}, chart 1 sees {counts[1]}",
    )


def locate_isolated_points(charts):
    """Rational points of V where the transform is singular, or Unsupported.

    Returns a list of (chart index, Fraction). Chart 1 contributes only t = 0;
    every other point of V is read in chart 0.
    """
    points = []
    for chart in charts:
        eqs, codim, zero_vars = _chart_system(chart)
        sing = singular_locus_ideal(eqs, codim)
        restricted = [specialize(g, {v: 0 for v in zero_vars}) for g in sing.generators]
        nonzero = [p for p in restricted if p]
        if not nonzero:
            return Unsupported(f"chart {chart.index}: V lies in the singular locus", {})
        g = nonzero[0].monic()
        for p in nonzero[1:]:
            g = gcd_uni(g, p)
        if g.is_ground:
            continue
        _, factors = g.factor_list()
        for factor, _ in factors:
            if factor.degree() > 1:
                return Unsupported(
                    f"chart {chart.index}: singular points at irrational roots of {render(factor)}", {}
                )
            x = factor.ring.gens[0]
            root = -to_fraction(factor.coeff(1)) / to_fraction(factor.coeff(x))
            if chart.index == 1 and root != 0:
                continue
            points.append((chart.index, root))
    points.sort()
    logger.debug(f"Isolated singular points on V: {points}")
    return points


def _shift(p, name, value):
    x = gen(p.ring, name)
    return substitute(p, {name: x + p.ring(rational(value))})


def _point_milnor_number(chart, value, max_degree):
    eqs, _, _ = _chart_system(chart)
    shifted = [_shift(e, chart.coordinate, value) for e in eqs]
    if chart.is_reduced:
        return milnor_hypersurface(shifted[0], at_origin=True, max_degree=max_degree)
    return milnor_icis_le_greuel(shifted, max_degree=max_degree)


def _singular_dimensions(charts, max_degree):
    dims = []
    for chart in charts:
        eqs, codim, zero_vars = _chart_system(chart)
        sing = singular_locus_ideal(eqs, codim)
        dims.append(ideal_dimension(_on_v(sing, zero_vars), max_degree))
    return dims


def _infinity_class(Q1):
    """Special point at t = 0 of chart 1, or None when det Q1(0) != 0."""
    det = Q1.det()
    order = min(m[0] for m in det.itermonoms())
    if order == 0:
        return None
    grid = Q1.at(0)
    rank = DomainMatrix([[QQ.convert(e) for e in row] for row in grid], (Q1.size, Q1.size), QQ).rank()
    t = gen(Q1.ring, Q1.param)
    return SpecialPointClass(t, 1, order, Q1.size - rank)


def _generic_slice_value(det, param, seed):
    rng = random.Random(f"{seed}:slice")
    while True:
        c = rng.choice((-1, 1)) * rng.randint(1, 50)
        if specialize(det, {param: c}) != 0:
            return c


def _polar_check(chart, seed, attempt, max_degree):
    """Y* split and genericity of the bent projection on the chart.

    Raises ReseedRequired when either choice is not generic.
    """
    f, ystar = ystar_reduction(chart, seed, attempt, max_degree=max_degree)
    rng = random.Random(f"{seed}:{attempt}:bend")
    if chart.is_reduced:
        target = chart.hypersurface
        ystar_eqs = []
    else:
        target = f
        ystar_eqs = ystar
    size = len(variable_names(target)) - 1
    bend = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(size)]
    _, generic = polar_curve(target, ystar_eqs, bend, max_degree=max_degree)
    if not generic:
        raise ReseedRequired(f"polar locus for bend {[str(a) for a in bend]} has dimension above 1")

    # singular points of Y* lie over singular points of the transform
    ystar_sing = singular_locus_ideal(ystar, 2)
    contained = None
    try:
        if ideal_dimension(ystar_sing, max_degree) < 0:
            contained = True
        else:
            chart_sing = singular_locus_ideal(list(chart.equations), 3)
            contained = all(radical_contains(ystar_sing, g, max_degree) for g in chart_sing.generators)
    except ResourceLimitError as e:
        logger.warning(f"Y* singular-locus containment check skipped: {e}")
    return {
        'stage': 'polar',
        'attempt': attempt,
        'bend': [str(a) for a in bend],
        'generic': True,
        'ystar': [render(g) for g in ystar],
        'ystar_singular_locus_contained': contained,
    }


def _perturb(M, chart0, seed, max_degree, trace):
    """Reseed loop: (perturbation, axis class, attempts used)."""
    for attempt in range(MAX_RESEEDS):
        try:
            perturbation = generic_rank1_perturbation(M, seed, attempt)
            polar = _polar_check(chart0, seed, attempt, max_degree)
            axis = classify_axis(perturbation.charts[1], perturbation, max_degree)
        except ReseedRequired as e:
            logger.info(f"Reseed after attempt {attempt}: {e.reason}")
            trace.append({'stage': 'reseed', 'attempt': attempt, 'reason': e.reason})
            continue
        trace.append({'stage': 'perturbation', **perturbation.to_dict()})
        trace.append(polar)
        return perturbation, axis, attempt
    logger.error(f"No generic perturbation after {MAX_RESEEDS} attempts (seed {seed})")
    raise ResourceLimitError(f"reseed cap of {MAX_RESEEDS} attempts exhausted")


def _special_point_entries(classes, coordinate):
    entries = []
    for c in classes:
        doc = c.to_dict()
        doc['chart'] = 'infinity' if coordinate is None else 0
        entries.append(doc)
    return entries


def _line_path(M, charts, seed, max_degree, trace, validation):
    n = M.n
    for chart in charts:
        if not chart.is_reduced:
            return _unsupported_report(n, f"chart {chart.index} does not reduce to a hypersurface",
                                       'reduction', seed, trace, validation)
    families = []
    for chart in charts:
        Q = quadratic_family(chart.hypersurface, chart.coordinate)
        if isinstance(Q, NotQuadratic):
            return _unsupported_report(n, f"chart {chart.index}: {Q.reason}", 'quadratic_family',
                                       seed, trace, validation)
        families.append(Q)
    Q0, Q1 = families
    trace.append({'stage': 'quadratic_family', 'Q0': Q0.to_list(), 'Q1': Q1.to_list(),
                  'det0': render(Q0.det()), 'det1': render(Q1.det())})

    try:
        classes0 = special_points(Q0, Q0.param)
        classes1 = special_points(Q1, Q1.param)
    except DomainError as e:
        return _unsupported_report(n, str(e), 'special_points', seed, trace, validation)
    infinity = _infinity_class(Q1)
    all_classes = classes0 + ([infinity] if infinity else [])
    entries = _special_point_entries(classes0, Q0.param)
    if infinity:
        entries += _special_point_entries([infinity], None)
    cross = chart_point_cross_check(classes0, classes1)
    trace.append({'stage': 'special_points', 'count': sum(c.degree for c in all_classes),
                  'deg_det0': Q0.det().degree(), 'cross_check': cross.to_dict()})
    if not cross.passed:
        logger.warning(f"Chart cross-check failed: {cross.detail}")

    slice_value = _generic_slice_value(Q0.det(), Q0.param, seed)
    mu_perp = transversal_milnor_number(charts[0], slice_value, max_degree)
    if mu_perp == INFINITE:
        return _unsupported_report(n, "transversal slice is not an isolated singularity",
                                   'transversal', seed, trace, validation, special_points=entries)
    transversal = AbelianGroup.free(int(mu_perp))
    transversal_doc = {'milnor': int(mu_perp), 'group': str(transversal)}
    trace.append({'stage': 'transversal', 'slice': slice_value, 'milnor': int(mu_perp)})

    perturbation, axis, attempts = _perturb(M, charts[0], seed, max_degree, trace)
    axis_chart = reduce_to_hypersurface(tjurina_chart(perturbation.model, 1), max_degree)
    if not isinstance(axis_chart, NotReducible):
        axis_mu = transversal_milnor_number(axis_chart, 0, max_degree)
        transversal_doc['axis_slice_milnor'] = 'infinite' if axis_mu == INFINITE else int(axis_mu)

    pieces = []
    for c in all_classes:
        if not c.dinfty:
            pieces.append(BoundaryPiece('special_point', n, None, False, c.degree))
            continue
        pieces.append(BoundaryPiece.dinfty_point(n, c.degree))
        wang = wang_homology(IntMatrix.from_rows([[-1]]), n)
        trace.append({'stage': 'wang', 'minpoly': render(c.minpoly), 'homology': wang.to_list(n)})

    result = assemble_rank1_homology(n, pieces, axis, transversal)
    extra = dict(special_points=entries, axis=axis.to_dict(), transversal=transversal_doc,
                 reseeds=attempts)
    if isinstance(result, Unsupported):
        return _unsupported_report(n, result.reason, 'assembly', seed, trace, validation, **extra)
    affine = assemble_rank1_homology(n, pieces, axis, transversal, axis_removed=True)
    assembly = {'stage': 'assembly', 'horizontal_rank': result.horizontal_rank,
                'vertical_rank': result.vertical_rank}
    if result.h1_prime is not None:
        assembly['boundary_h1'] = str(result.h1_prime)
    trace.append(assembly)
    trace.append({'stage': 'transfer', 'justification': ASSUMPTIONS[1]})

    groups = dict(result.homology.groups)
    report = HomologyReport(
        dimension=n,
        classification=LINE_QUADRATIC,
        homology=groups,
        vertical_rank=result.vertical_rank,
        euler=_euler(groups, n),
        trace=trace,
        seed=seed,
        validation=validation,
        affine_betti=affine.homology.betti(n),
        torsion_unknown=(1,) if n == 2 else (),
        **extra,
    )
    return report


def analyze(M, seed=None, max_degree=None, check_isolated=None):
    """Classify the model and compute the homology of its Milnor fibre.

    Args:
        M: DetModel with t = 2 and N in {4, 5}
        seed: seed for every generic choice (model option, then 1)
        max_degree: degree budget for standard bases

    Returns:
        HomologyReport. Invalid input raises; everything else that cannot be
        computed yields classification 'unsupported'.
    """
    seed = seed if seed is not None else M.options.get('seed', 1)
    max_degree = max_degree or M.options.get('max_degree')
    if M.N not in (4, 5):
        raise DomainError(f"models in N = 4 or 5 variables are supported, got N = {M.N}")
    n = M.n
    hint = M.options.get('dimension_hint')
    if hint is not None and hint != n:
        logger.warning(f"dimension_hint {hint} disagrees with n = {n}")

    trace = []
    try:
        validation = validate_model(M, check_isolated, max_degree).to_dict()
    except ResourceLimitError as e:
        return _unsupported_report(n, str(e), 'validate', seed, trace)
    trace.append({'stage': 'validate', **validation})
    logger.info(f"Analyzing n={n} model with seed {seed}")

    try:
        charts = []
        for index in (0, 1):
            chart = tjurina_chart(M, index)
            reduced = reduce_to_hypersurface(chart, max_degree)
            if isinstance(reduced, NotReducible):
                trace.append({'stage': 'reduction', 'chart': index, 'reduced': False, 'reason': reduced.reason})
                charts.append(chart)
            else:
                trace.append({'stage': 'reduction', 'chart': index, 'reduced': True,
                              'hypersurface': render(reduced.hypersurface),
                              'eliminated': {k: render(v) for k, v in sorted(reduced.eliminated.items())}})
                charts.append(reduced)

        dims = _singular_dimensions(charts, max_degree)
        trace.append({'stage': 'singular_locus', 'dimension_on_V': dims})

        if max(dims) < 0:
            logger.info("Tjurina transform is smooth along V")
            report = HomologyReport(
                dimension=n, classification=SMOOTH_TRANSFORM, homology=betti_isolated(n, []),
                vertical_rank=1, trace=trace, seed=seed, validation=validation,
                torsion_unknown=(1,) if n == 2 else (),
            )
            report.euler = _euler(report.homology, n)
        elif max(dims) == 0:
            located = locate_isolated_points(charts)
            if isinstance(located, Unsupported):
                return _unsupported_report(n, located.reason, 'locate_points', seed, trace, validation)
            milnor = []
            for index, value in located:
                mu = _point_milnor_number(charts[index], value, max_degree)
                if mu == INFINITE:
                    return _unsupported_report(n, f"singular point ({index}, {value}) is not isolated",
                                               'milnor', seed, trace, validation)
                milnor.append(int(mu))
            trace.append({'stage': 'isolated_points',
                          'points': [{'chart': i, 'value': str(v), 'milnor': mu}
                                     for (i, v), mu in zip(located, milnor)]})
            logger.info(f"Isolated Tjurina singularities with Milnor numbers {milnor}")
            groups = betti_isolated(n, milnor)
            report = HomologyReport(
                dimension=n, classification=ISOLATED_TJURINA, homology=groups, vertical_rank=1,
                euler=_euler(groups, n), trace=trace, seed=seed, validation=validation,
                torsion_unknown=(1,) if n == 2 else (),
            )
        elif max(dims) == 1:
            logger.info("Tjurina transform is singular along V; taking the line path")
            report = _line_path(M, charts, seed, max_degree, trace, validation)
        else:
            return _unsupported_report(n, f"singular locus along V has dimension {max(dims)}",
                                       'singular_locus', seed, trace, validation)
    except ResourceLimitError as e:
        return _unsupported_report(n, str(e), 'resource_limit', seed, trace, validation)

    if report.supported:
        report.checks = consistency_checks(report)
        failed = [c.name for c in report.checks if not c.passed]
        if failed:
            logger.warning(f"Consistency checks failed: {failed}")
        logger.info(f"Classification {report.classification}: betti {report.betti}, euler {report.euler}")
    return report


def consistency_checks(report):
    """Audit a report against the facts every Milnor fibre satisfies."""
    n = report.dimension
    betti = report.betti
    checks = []

    b1 = betti[1] if len(betti) > 1 else None
    checks.append(CheckResult(
        'b1_zero', b1 is None or b1 == 0, 'the Milnor fibre is simply connected',
        'unknown' if b1 is None else f"b1 = {b1}",
    ))

    vanishing = [i for i in range(1, n - 1) if betti[i] not in (None, 0)]
    checks.append(CheckResult(
        'vanishing_range', not vanishing, 'b_i must be zero in the range 0 < i <= n - 2',
        f"nonzero in degrees {vanishing}" if vanishing else '',
    ))

    checks.append(CheckResult(
        'vertical_rank', report.vertical_rank == 1,
        'the vertical classes give a perfect pairing with H^2 of the Grassmannian',
        f"vertical rank {report.vertical_rank}",
    ))

    if n == 3:
        b2 = betti[2]
        checks.append(CheckResult(
            'h2_vertical_only', b2 is None or b2 == 1,
            'H_2 is Z and consists of the vertical cycles only',
            'unknown' if b2 is None else f"b2 = {b2}",
        ))
        b3 = betti[3]
        if isinstance(report.euler, int) and b3 is not None:
            passed = b3 == 2 - report.euler
            detail = f"b3 = {b3}, chi = {report.euler}"
        else:
            passed, detail = True, 'unknown'
        checks.append(CheckResult('euler_identity', passed, 'b_3 = 2 - chi for threefolds', detail))
    else:
        checks.append(CheckResult('euler_identity', True, 'b_3 = 2 - chi for threefolds',
                                  'stated for threefolds only'))

    if isinstance(report.euler, int) and None not in betti:
        chi = sum((-1) ** q * b for q, b in enumerate(betti))
        checks.append(CheckResult(
            'euler_from_betti', chi == report.euler, 'chi is the alternating sum of the Betti numbers',
            f"alternating sum {chi}, reported {report.euler}",
        ))
    return checks


@dataclass(frozen=True)
class SweepResult:
    reports: dict
    seed_independent: bool

    def to_dict(self):
        return {
            'seed_independent': self.seed_independent,
            'reports': {str(seed): report for seed, report in sorted(self.reports.items())},
        }


def _analyze_worker(args):
    from detvan.exprparse import parse_model

    text, seed, max_degree = args
    return seed, analyze(parse_model(text), seed=seed, max_degree=max_degree).to_dict()


def sweep(model, seeds, workers=None, max_degree=None, progress=True):
    """Analyze ``model`` for several seeds and compare the answers."""
    from detvan.exprparse import dump_model

    seeds = list(dict.fromkeys(seeds))
    if not seeds:
        raise DomainError("sweep needs at least one seed")
    text = dump_model(model)
    tasks = [(text, seed, max_degree) for seed in seeds]
    workers = MAX_PARALLEL_WORKERS if workers is None else workers
    reports = {}
    if workers == 1:
        for task in tqdm(tasks, desc="Analyzing seeds", disable=not progress):
            seed, report = _analyze_worker(task)
            reports[seed] = report
    else:
        logger.info(f"Sweeping {len(seeds)} seeds using up to {workers or 'all'} CPU cores")
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_analyze_worker, task) for task in tasks]
            with tqdm(total=len(futures), desc="Analyzing seeds", disable=not progress) as pbar:
                for future in concurrent.futures.as_completed(futures):
                    seed, report = future.result()
                    reports[seed] = report
                    pbar.update(1)

    answers = [{k: reports[s].get(k) for k in SEED_INDEPENDENT_KEYS} for s in seeds]
    independent = all(a == answers[0] for a in answers)
    if not independent:
        logger.warning(f"Homology differs between seeds {seeds}")
    return SweepResult(reports=reports, seed_independent=independent)


__all__ = [
    'HomologyReport', 'CheckResult', 'SweepResult', 'betti_isolated', 'analyze',
    'consistency_checks', 'transversal_milnor_number', 'chart_point_cross_check',
    'locate_isolated_points', 'sweep', 'MAX_RESEEDS',
]
