"""
The determinantal model: a 3x2 polynomial matrix A, the ideal of its 2x2
minors, the two affine charts of its Tjurina transform in C^N x P^1, and the
chart-level geometry the pipeline reads off them.

Chart 0 uses the P^1 coordinate s = s_2/s_1 and the equations A*(1, s)^T;
chart 1 uses t = s_1/s_2 and A*(t, 1)^T. The exceptional set V is the P^1
over the origin, the coordinate axis in each chart.
"""

import logging
import os
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from detvan.errors import DomainError, ReseedRequired, ResourceLimitError, StructuralError
from detvan.idealalg import (
    GLOBAL, INFINITE, Ideal, groebner_basis, ideal_dimension, milnor_on_hyperplane,
    singular_locus_ideal,
)
from detvan.polycore import (
    gcd_uni, gen, poly_ring, render, specialize, squarefree_decompose, substitute, to_ring,
    variable_names,
)

logger = logging.getLogger(__name__)

# Run the global isolatedness proxy inside validate_model
CHECK_ISOLATED = os.environ.get('DETVAN_CHECK_ISOLATED', 'true').lower() == 'true'

CHART_COORDINATES = ('s', 't')
DELTA = 'delta'


def _fresh_name(base, taken):
    name = base
    index = 1
    while name in taken:
        name = f"{base}{index}"
        index += 1
    return name


@dataclass(frozen=True)
class DetModel:
    """A (t+1) x t polynomial matrix over an ordered variable list, t = 2."""

    matrix: tuple
    variables: tuple
    options: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        names = tuple(self.variables)
        rows = [tuple(row) for row in self.matrix]
        if not rows or any(len(row) != len(rows[0]) for row in rows):
            raise StructuralError("matrix must be rectangular")
        t = len(rows[0])
        if len(rows) != t + 1:
            raise StructuralError(f"shape {len(rows)}x{t}: expected {t + 1} rows for {t} columns")
        if t != 2:
            raise StructuralError(f"only t = 2 is supported, got t = {t}")
        rows = tuple(tuple(to_ring(e, names, GLOBAL) for e in row) for row in rows)
        for r, row in enumerate(rows):
            for c, entry in enumerate(row):
                if entry.coeff(1) != 0:
                    raise DomainError(f"entry ({r}, {c}) = {render(entry)} does not vanish at the origin")
        object.__setattr__(self, 'matrix', rows)
        object.__setattr__(self, 'variables', names)

    @property
    def t(self):
        return len(self.matrix[0])

    @property
    def N(self):
        return len(self.variables)

    @property
    def n(self):
        """Dimension of the singularity X_0 (and of its Tjurina transform)."""
        return self.N - 2

    @property
    def ring(self):
        return poly_ring(self.variables)

    def minors(self):
        A = self.matrix
        return tuple(
            A[i][0] * A[j][1] - A[i][1] * A[j][0]
            for i, j in ((0, 1), (0, 2), (1, 2))
        )

    def column_transform(self, W):
        """The model A*W for an invertible integer 2x2 matrix W."""
        rows = tuple(
            tuple(row[0] * W[0][c] + row[1] * W[1][c] for c in range(2))
            for row in self.matrix
        )
        return DetModel(rows, self.variables, self.options)


@dataclass(frozen=True)
class ValidationReport:
    minors: tuple
    dimension: int
    expected_dimension: int
    smoothable: bool
    isolated: object = None
    singular_dimension: object = None

    @property
    def codimension(self):
        return len(self.minors[0].ring.symbols) - self.dimension

    def to_dict(self):
        return {
            'minors': [render(m) for m in self.minors],
            'dimension': self.dimension,
            'codimension': self.codimension,
            'smoothable': self.smoothable,
            'isolated': self.isolated,
            'singular_dimension': self.singular_dimension,
        }


def validate_model(M, check_isolated=None, max_degree=None):
    """Check expected codimension, smoothability and (as a proxy) isolatedness.

    Raises DomainError when the minors ideal does not have codimension 2.
    """
    check_isolated = CHECK_ISOLATED if check_isolated is None else check_isolated
    minors = M.minors()
    nonzero = tuple(m for m in minors if m)
    if not nonzero:
        raise DomainError("all 2x2 minors vanish identically")
    dimension = ideal_dimension(Ideal(nonzero), max_degree)
    expected = M.N - 2
    if dimension != expected:
        raise DomainError(
            f"minors ideal has dimension {dimension}, expected {expected} (codimension 2 in C^{M.N})"
        )
    smoothable = M.N < (M.t + 1) * M.t

    isolated = singular_dimension = None
    if check_isolated:
        try:
            singular_dimension = ideal_dimension(singular_locus_ideal(list(nonzero), 2), max_degree)
            isolated = singular_dimension <= 0
        except ResourceLimitError as e:
            logger.warning(f"Isolatedness check skipped: {e}")
    logger.info(f"Validated model: dim {dimension}, smoothable {smoothable}, isolated {isolated}")
    return ValidationReport(minors, dimension, expected, smoothable, isolated, singular_dimension)


@dataclass(frozen=True)
class Chart:
    """One affine chart of the Tjurina transform."""

    index: int
    coordinate: str
    equations: tuple
    model_variables: tuple
    parameters: tuple = ()
    hypersurface: object = None
    eliminated: dict = field(default_factory=dict, compare=False)
    elimination_verified: object = None

    @property
    def names(self):
        return self.model_variables + (self.coordinate,) + self.parameters

    @property
    def ring(self):
        return poly_ring(self.names)

    @property
    def is_reduced(self):
        return self.hypersurface is not None

    @property
    def transversal_variables(self):
        """Model variables that survive the reduction."""
        return tuple(v for v in self.model_variables if v not in self.eliminated)

    def to_dict(self):
        doc = {
            'index': self.index,
            'coordinate': self.coordinate,
            'equations': [render(e) for e in self.equations],
        }
        if self.hypersurface is not None:
            doc['hypersurface'] = render(self.hypersurface)
            doc['eliminated'] = {k: render(v) for k, v in sorted(self.eliminated.items())}
            doc['elimination_verified'] = self.elimination_verified
        return doc


def chart_coordinate(M, chart):
    return _fresh_name(CHART_COORDINATES[chart], set(M.variables))


def tjurina_chart(M, chart):
    """Equations A*(1, s)^T (chart 0) or A*(t, 1)^T (chart 1) in N + 1 variables."""
    if chart not in (0, 1):
        raise StructuralError(f"chart must be 0 or 1, got {chart}")
    coordinate = chart_coordinate(M, chart)
    names = M.variables + (coordinate,)
    c = gen(poly_ring(names), coordinate)
    equations = []
    for row in M.matrix:
        a0, a1 = (to_ring(e, names, GLOBAL) for e in row)
        equations.append(a0 + c * a1 if chart == 0 else c * a0 + a1)
    return Chart(index=chart, coordinate=coordinate, equations=tuple(equations),
                 model_variables=M.variables)


@dataclass(frozen=True)
class NotReducible:
    reason: str


@dataclass(frozen=True)
class NotQuadratic:
    reason: str


def _linear_pivot(eq, name):
    """Constant c with eq = c*name + r and name not in r, or None."""
    x = gen(eq.ring, name)
    if eq.degree(x) != 1:
        return None
    coeff = eq.coeff_wrt(x, 1)
    if coeff.is_ground and coeff:
        return coeff.LC
    return None


def _eliminate(equations, candidates):
    """Two unit-linear eliminations from two distinct equations, applied in order."""
    eqs = list(equations)
    eliminated = {}
    used = []
    for i in range(len(eqs)):
        if len(eliminated) == 2:
            break
        eq = eqs[i]
        for name in candidates:
            if name in eliminated:
                continue
            c = _linear_pivot(eq, name)
            if c is None:
                continue
            x = gen(eq.ring, name)
            value = -(eq - x * c) * (QQ.one / c)
            eliminated[name] = value
            used.append(i)
            eqs = [substitute(e, {name: value}) if j != i else e for j, e in enumerate(eqs)]
            break
    if len(eliminated) < 2:
        return None
    # earlier values may mention later eliminated variables
    names = list(eliminated)
    for name in names:
        others = {k: v for k, v in eliminated.items() if k != name}
        eliminated[name] = substitute(eliminated[name], others)
    rest = [eqs[j] for j in range(len(eqs)) if j not in used]
    return eliminated, rest


def _rref_rows(equations):
    """Reduced row echelon form of the equations' coefficient matrix over QQ."""
    ring = equations[0].ring
    monomials = sorted({m for e in equations for m in e.itermonoms()},
                       key=lambda m: ring.order(m), reverse=True)
    grid = [[e.get(m, QQ.zero) for m in monomials] for e in equations]
    rref, pivots = DomainMatrix(grid, (len(equations), len(monomials)), QQ).rref()
    rows = []
    for row in rref.to_list()[:len(pivots)]:
        rows.append(ring.from_dict({m: c for m, c in zip(monomials, row) if c}))
    return rows


def reduce_to_hypersurface(chart, max_degree=None):
    """Eliminate two model variables that occur unit-linearly, leaving one hypersurface h.

    Returns the chart with ``hypersurface`` and ``eliminated`` populated, or
    NotReducible.
    """
    candidates = chart.model_variables
    result = _eliminate(chart.equations, candidates)
    if result is None:
        rows = _rref_rows(list(chart.equations))
        if len(rows) == len(chart.equations):
            result = _eliminate(rows, candidates)
    if result is None:
        return NotReducible(
            f"chart {chart.index}: no two equations are linear with constant coefficient in distinct variables"
        )
    eliminated, rest = result
    rest = [r for r in rest if r]
    if len(rest) != 1:
        return NotReducible(f"chart {chart.index}: reduction leaves {len(rest)} equations")
    h = rest[0]

    ring = chart.ring
    relations = [gen(ring, name) - value for name, value in eliminated.items()]
    verified = None
    try:
        lhs = groebner_basis(Ideal(tuple(chart.equations)), max_degree)
        rhs = groebner_basis(Ideal(tuple([h] + relations)), max_degree)
        verified = (all(lhs.contains(g) for g in [h] + relations)
                    and all(rhs.contains(e) for e in chart.equations))
    except ResourceLimitError as e:
        logger.warning(f"Chart {chart.index} elimination left unverified: {e}")
    if verified is False:
        return NotReducible(f"chart {chart.index}: elimination changes the chart ideal")

    kept = tuple(n for n in chart.names if n not in eliminated)
    h = to_ring(h, kept, GLOBAL)
    eliminated = {k: to_ring(v, kept, GLOBAL) for k, v in eliminated.items()}
    logger.debug(f"Chart {chart.index}: eliminated {sorted(eliminated)}, h = {render(h)}")
    return replace(chart, hypersurface=h, eliminated=eliminated, elimination_verified=verified)


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric matrix of univariate polynomials in ``param`` acting on ``variables``."""

    variables: tuple
    param: str
    entries: tuple

    @property
    def size(self):
        return len(self.variables)

    @property
    def ring(self):
        return poly_ring((self.param,))

    def det(self):
        if self.size == 0:
            return self.ring.one
        K = self.ring.to_domain()
        return self.ring(DomainMatrix([list(row) for row in self.entries], (self.size, self.size), K).det())

    def at(self, value):
        """Rational matrix Q(value)."""
        return [[specialize(e, {self.param: value}) for e in row] for row in self.entries]

    def form(self, ring):
        """x^T Q x in ``ring``."""
        total = ring.zero
        for i, a in enumerate(self.variables):
            for j, b in enumerate(self.variables):
                entry = to_ring(self.entries[i][j], variable_names(ring), GLOBAL)
                total += entry * gen(ring, a) * gen(ring, b)
        return total

    def to_list(self):
        return [[render(e) for e in row] for row in self.entries]


def quadratic_family(h, param, exclude=()):
    """Write h as x^T Q(param) x in the remaining variables, or NotQuadratic."""
    names = variable_names(h)
    if param not in names:
        raise StructuralError(f"unknown parameter '{param}'")
    transversal = tuple(n for n in names if n != param and n not in exclude)
    index = {n: i for i, n in enumerate(names)}
    uni = poly_ring((param,))
    p = gen(uni, param)
    size = len(transversal)
    Q = [[uni.zero] * size for _ in range(size)]
    for monom, coeff in h.iterterms():
        if any(monom[index[n]] for n in exclude):
            return NotQuadratic(f"term with excluded variable in {render(h)}")
        degrees = [monom[index[n]] for n in transversal]
        if sum(degrees) != 2:
            return NotQuadratic(f"h has a term of transversal degree {sum(degrees)}")
        term = uni(coeff) * p ** monom[index[param]]
        hit = [i for i, d in enumerate(degrees) for _ in range(d)]
        i, j = hit
        if i == j:
            Q[i][i] += term
        else:
            Q[i][j] += term * QQ(1, 2)
            Q[j][i] += term * QQ(1, 2)
    return SymMatrix(transversal, param, tuple(tuple(row) for row in Q))


@dataclass(frozen=True)
class SpecialPointClass:
    """Conjugate special points: roots of ``minpoly`` with the same local type."""

    minpoly: object
    degree: int
    multiplicity: int
    corank: int

    @property
    def dinfty(self):
        return self.multiplicity == 1 and self.corank == 1

    @property
    def point_class(self):
        if self.dinfty:
            return 'D_infinity'
        if self.multiplicity > 1:
            return 'non_reduced'
        return 'higher_corank'

    def to_dict(self):
        return {
            'minpoly': render(self.minpoly),
            'degree': self.degree,
            'multiplicity': self.multiplicity,
            'corank': self.corank,
            'class': self.point_class,
        }


def _corank_mod(entries, p):
    """Coranks of a matrix of univariate polynomials over QQ[x]/(p), splitting p when needed.

    Returns a list of (factor, corank) whose factors multiply to p.
    """
    A = [[e.rem(p) for e in row] for row in entries]
    size = len(A)
    rank = 0
    col = 0
    while rank < size and col < size:
        pivot_row = next((r for r in range(rank, size) if A[r][col]), None)
        if pivot_row is None:
            col += 1
            continue
        pivot = A[pivot_row][col]
        g = gcd_uni(pivot, p)
        if g.degree() > 0:
            other = p.exquo(g)
            logger.debug(f"Dynamic evaluation split {render(p)} into {render(g)} and {render(other)}")
            return _corank_mod(entries, g) + _corank_mod(entries, other)
        inverse, _, _ = pivot.gcdex(p)
        A[rank], A[pivot_row] = A[pivot_row], A[rank]
        A[rank] = [(e * inverse).rem(p) for e in A[rank]]
        for r in range(size):
            if r != rank and A[r][col]:
                factor = A[r][col]
                A[r] = [(a - factor * b).rem(p) for a, b in zip(A[r], A[rank])]
        rank += 1
        col += 1
    return [(p, size - rank)]


def special_points(Q, param):
    """Classify the roots of det Q(param) by multiplicity and corank.

    Raises DomainError when det Q vanishes identically.
    """
    det = Q.det()
    if not det:
        raise DomainError("quadratic family is degenerate everywhere (det Q = 0)")
    if det.is_ground:
        return []
    classes = []
    for factor, multiplicity in squarefree_decompose(det):
        parts = {}
        for part, corank in _corank_mod(Q.entries, factor):
            parts[corank] = parts[corank] * part if corank in parts else part
        for corank, part in sorted(parts.items()):
            part = part.monic()
            classes.append(SpecialPointClass(part, part.degree(), multiplicity, corank))
    logger.debug(f"det Q = {render(det)}: {[c.to_dict() for c in classes]}")
    return classes


@dataclass(frozen=True)
class Perturbation:
    """Generic rank-1 perturbation A - delta*B after normalizing the axis to chart 1, t = 0.

    ``column_op`` W moves P^1 so that the axis sits at t = 0; ``row_op`` U
    turns ``direction`` u into e_3, so U*B*... is the normal form e_31.
    """

    B: tuple
    rank: int
    axis_chart: int
    axis_value: int
    seed: int
    attempt: int
    column_op: tuple
    row_op: tuple
    direction: tuple
    delta: str
    model: DetModel
    charts: tuple

    def to_dict(self):
        chart, value = axis_point(self)
        return {
            'seed': self.seed,
            'attempt': self.attempt,
            'B': [[str(e) for e in row] for row in self.B],
            'column_op': [list(r) for r in self.column_op],
            'row_op': [[str(e) for e in r] for r in self.row_op],
            'axis': {'chart': chart, 'value': str(value)},
        }


def _normalization(seed, attempt):
    if attempt == 0:
        return ((1, 0), (0, 1)), (Fraction(0), Fraction(0))
    rng = random.Random(f"{seed}:{attempt}")
    swap = rng.random() < 0.5
    c = rng.randint(-4, 4)
    alpha = Fraction(rng.randint(-3, 3))
    beta = Fraction(rng.randint(-3, 3))
    W = ((1, c), (0, 1))
    if swap:
        W = (W[1], W[0])
    return W, (alpha, beta)


def generic_rank1_perturbation(M, seed, attempt=0):
    """Seeded rank-1 perturbation with its axis at (0, infinity).

    Attempt 0 keeps the given coordinates, so B = e_31 and the perturbation
    is the constant -delta in the lower left entry. Later attempts draw a
    column operation (swap and translation in the chart-1 coordinate) and a
    direction u = (alpha, beta, 1) from ``random.Random(f"{seed}:{attempt}")``.

    Raises ReseedRequired when the axis point is one of the special points.
    """
    W, (alpha, beta) = _normalization(seed, attempt)
    normalized = M.column_transform(W)
    u = (alpha, beta, Fraction(1))
    B = tuple(tuple(u[i] if j == 0 else Fraction(0) for j in range(2)) for i in range(3))
    U = ((1, 0, -alpha), (0, 1, -beta), (0, 0, 1))

    taken = set(M.variables) | {chart_coordinate(M, 0), chart_coordinate(M, 1)}
    delta = _fresh_name(DELTA, taken)
    charts = []
    for index in (0, 1):
        base = tjurina_chart(normalized, index)
        names = base.names + (delta,)
        ring = poly_ring(names)
        d = gen(ring, delta)
        section = ring.one if index == 0 else gen(ring, base.coordinate)
        equations = tuple(
            to_ring(e, names, GLOBAL) - d * section * ring(QQ(ui.numerator, ui.denominator))
            for e, ui in zip(base.equations, u)
        )
        charts.append(replace(base, equations=equations, parameters=(delta,)))

    perturbation = Perturbation(
        B=B, rank=1, axis_chart=1, axis_value=0, seed=seed, attempt=attempt,
        column_op=W, row_op=U, direction=u, delta=delta, model=normalized, charts=tuple(charts),
    )

    # axis collision: the transversal form degenerates at t = 0 of the normalized chart 1
    reduced = reduce_to_hypersurface(tjurina_chart(normalized, 1))
    if not isinstance(reduced, NotReducible):
        Q = quadratic_family(reduced.hypersurface, reduced.coordinate)
        if not isinstance(Q, NotQuadratic):
            det0 = specialize(Q.det(), {Q.param: 0}) if Q.size else 1
            if det0 == 0:
                chart, value = axis_point(perturbation)
                raise ReseedRequired(
                    f"axis point (chart {chart}, {value}) is a special point of the quadratic family"
                )
    logger.info(f"Rank-1 perturbation seed {seed} attempt {attempt}: axis at {axis_point(perturbation)}")
    return perturbation


def axis_point(perturbation):
    """(chart, value) of the axis point in the model's original P^1 coordinates."""
    W = perturbation.column_op
    # homogeneous image W * (0, 1)^T
    s1, s2 = W[0][1], W[1][1]
    if s2 != 0:
        return 1, Fraction(s1, s2)
    return 0, Fraction(s2, s1)


def classify_axis(chart1, perturbation, max_degree=None):
    """A_infinity when the transversal form is nondegenerate at the axis, else icis(mu).

    mu sums the Milnor numbers of the perturbed hypersurface over the whole axis
    fiber. Raises DomainError when that singularity is not isolated.
    """
    from detvan.abelian import AxisClass

    delta = perturbation.delta
    reduced = reduce_to_hypersurface(chart1, max_degree)
    if isinstance(reduced, NotReducible):
        raise DomainError(f"axis chart does not reduce to a hypersurface: {reduced.reason}")
    h = reduced.hypersurface
    h0 = to_ring(specialize(h, {delta: 0}), tuple(n for n in variable_names(h) if n != delta), GLOBAL)
    Q = quadratic_family(h0, reduced.coordinate)
    if not isinstance(Q, NotQuadratic):
        det0 = specialize(Q.det(), {Q.param: 0}) if Q.size else 1
        if det0 != 0:
            return AxisClass.a_infinity()
    h1 = specialize(h, {delta: 1})
    mu = milnor_on_hyperplane(h1, reduced.coordinate, max_degree=max_degree)
    if mu == INFINITE:
        raise DomainError("the residual singularity at the axis is not isolated")
    return AxisClass.icis(int(mu))


def ystar_reduction(chart, seed, attempt=0, combination=None, max_degree=None):
    """Split a combination of the chart equations into f and the equations of Y*.

    Returns (f, [g_1, g_2]). Attempt 0 uses the equations as given.
    Raises ReseedRequired for a singular combination or a Y* with a singular
    locus of dimension above 1.
    """
    if combination is None:
        if attempt == 0:
            combination = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        else:
            rng = random.Random(f"{seed}:{attempt}:ystar")
            combination = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
    C = [[QQ.convert(e) if not isinstance(e, Fraction) else QQ(e.numerator, e.denominator)
          for e in row] for row in combination]
    if DomainMatrix(C, (3, 3), QQ).det() == 0:
        raise ReseedRequired("singular combination of the chart equations")
    eqs = chart.equations
    combined = [sum((eqs[j] * eqs[j].ring(C[i][j]) for j in range(3)), eqs[0].ring.zero)
                for i in range(3)]
    ystar = combined[:2]
    f = combined[2]
    singular = singular_locus_ideal(ystar, 2)
    dimension = ideal_dimension(singular, max_degree)
    if dimension > 1:
        raise ReseedRequired(f"Y* has a singular locus of dimension {dimension}")
    return f, ystar


def chart_report(M, max_degree=None):
    """Both charts, their reductions, quadratic families and special points."""
    charts = []
    for index in (0, 1):
        chart = tjurina_chart(M, index)
        doc = chart.to_dict()
        reduced = reduce_to_hypersurface(chart, max_degree)
        if isinstance(reduced, NotReducible):
            doc['reduction'] = {'status': 'not_reducible', 'reason': reduced.reason}
            charts.append(doc)
            continue
        doc.update(reduced.to_dict())
        Q = quadratic_family(reduced.hypersurface, reduced.coordinate)
        if isinstance(Q, NotQuadratic):
            doc['quadratic'] = {'status': 'not_quadratic', 'reason': Q.reason}
        else:
            doc['quadratic'] = {'Q': Q.to_list(), 'variables': list(Q.variables), 'det': render(Q.det())}
            try:
                doc['special_points'] = [c.to_dict() for c in special_points(Q, Q.param)]
            except DomainError as e:
                doc['special_points'] = {'status': 'degenerate', 'reason': str(e)}
        charts.append(doc)
    return {'variables': list(M.variables), 'charts': charts}
