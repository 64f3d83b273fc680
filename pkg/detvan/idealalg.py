"""
Ideal computations: Groebner bases for the global degree order, standard
bases for the local degree order, and the invariants read off them.

Global bases come from Buchberger's algorithm with the Gebauer-Moeller pair
update. Local bases replace the reduction step by Mora's weak normal form,
which picks the reducer of minimal ecart and remembers intermediate
remainders, so it terminates although the local order is not a well-order.
Every computation is bounded by a degree budget; running past it raises
ResourceLimitError instead of returning a partial basis.
"""

import itertools
import logging
import math
import os
from dataclasses import dataclass, field

from sympy.polys.matrices import DomainMatrix

from detvan.errors import DomainError, ResourceLimitError, StructuralError
from detvan.polycore import (
    PolyElement, differentiate, gen, ordering_of, poly_ring, rational, render, to_ring,
    total_degree, variable_names, with_ordering,
)

logger = logging.getLogger(__name__)

# Degree budget for every basis computation
MAX_DEGREE = int(os.environ.get('DETVAN_MAX_DEGREE', 24))

# Upper bound on S-pairs processed by one basis computation
MAX_PAIRS = int(os.environ.get('DETVAN_MAX_PAIRS', 20000))

# Highest power of the hyperplane and the function tried when summing along a fiber
MAX_FIBER_POWER = 16

INFINITE = math.inf

GLOBAL = 'global_degrevlex'
LOCAL = 'local_negdegrevlex'


@dataclass(frozen=True)
class Ideal:
    """Ideal given by generators over one variable list, tagged with a term order."""

    generators: tuple
    ordering: str = GLOBAL

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise StructuralError("an ideal needs at least one generator")
        ring = gens[0].ring
        for g in gens[1:]:
            if variable_names(g) != variable_names(ring):
                raise StructuralError(
                    f"generators over different variable lists: "
                    f"{list(variable_names(ring))} vs {list(variable_names(g))}"
                )
        gens = tuple(with_ordering(g, self.ordering) for g in gens)
        object.__setattr__(self, 'generators', gens)

    @property
    def ring(self):
        return self.generators[0].ring

    @property
    def variables(self):
        return variable_names(self.ring)

    def extend(self, polys):
        return Ideal(self.generators + tuple(polys), self.ordering)

    def localize(self):
        return Ideal(self.generators, LOCAL)

    def __str__(self):
        return '<' + ', '.join(render(g) for g in self.generators) + '>'


@dataclass(frozen=True)
class StandardBasis:
    elements: tuple
    ordering: str
    is_reduced: bool = False
    ring: object = field(default=None, compare=False)

    @property
    def leading_monomials(self):
        return tuple(g.LM for g in self.elements)

    @property
    def is_unit(self):
        zero = self.ring.zero_monom
        return any(g.LM == zero for g in self.elements)

    @property
    def variables(self):
        return variable_names(self.ring)

    def contains(self, f):
        """Ideal membership (in the local ring for local bases)."""
        return not normal_form(f, self)


def ecart(p):
    return total_degree(p) - sum(p.LM)


def spoly(f, g):
    """S-polynomial of two monic polynomials."""
    R = f.ring
    lcm = R.monomial_lcm(f.LM, g.LM)
    s1 = f.mul_monom(R.monomial_div(lcm, f.LM))
    s2 = g.mul_monom(R.monomial_div(lcm, g.LM))
    return s1 - s2


def _reduce_step(h, g):
    R = h.ring
    m = R.monomial_div(h.LM, g.LM)
    return h - g.mul_term((m, h.LC / g.LC))


def mora_normal_form(f, G):
    """Weak normal form of ``f`` against ``G`` for a local order.

    Returns h with u*f - h in <G> for a unit u of the local ring, and h = 0 or
    LM(h) not divisible by any LM(G).
    """
    R = f.ring
    h = f
    T = list(G)
    while h:
        divisors = [g for g in T if R.monomial_div(h.LM, g.LM) is not None]
        if not divisors:
            break
        g = min(divisors, key=ecart)
        if ecart(g) > ecart(h):
            T.append(h)
        h = _reduce_step(h, g)
    return h


def normal_form(f, basis):
    """Reduce ``f`` against a basis: full remainder (global) or Mora weak normal form (local)."""
    if isinstance(basis, StandardBasis):
        elements, ordering = list(basis.elements), basis.ordering
    else:
        elements = list(basis)
        ordering = ordering_of(elements[0]) if elements else GLOBAL
    if not elements:
        return f
    ring = elements[0].ring
    f = to_ring(f, variable_names(ring), ordering)
    if ordering == GLOBAL:
        return f.rem(elements)
    return mora_normal_form(f, elements)


def update(G, P, f, product_criterion=True):
    """Add ``f`` to the basis ``G`` and update the pair set ``P`` (Gebauer-Moeller).

    The product criterion only holds for global orders and is switched off
    for local ones.
    """
    R = f.ring
    lmf = f.LM
    lmG = [g.LM for g in G]
    lcm = R.monomial_lcm
    mul = R.monomial_mul
    div = R.monomial_div

    P = {p for p in P if (div(lcm(lmG[p[0]], lmG[p[1]]), lmf) is None or
                          lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf) or
                          lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf))}
    lcm_dict = {}
    for i in range(len(G)):
        lcm_dict.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimal_lcms = []
    for L in sorted(lcm_dict.keys(), key=lambda m: (sum(m), m)):
        if all(div(L, L_) is None for L_ in minimal_lcms):
            minimal_lcms.append(L)
    new_pairs = set()
    for L in minimal_lcms:
        if product_criterion and any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_dict[L]):
            continue
        new_pairs.add((min(lcm_dict[L]), len(G)))
    return G + [f], P | new_pairs


def select(G, P):
    """Pair with the lowest-degree lcm; ties broken by index."""
    R = G[0].ring
    return min(P, key=lambda p: (sum(R.monomial_lcm(G[p[0]].LM, G[p[1]].LM)), p))


def minimalize(G):
    """Drop elements whose leading monomial is divisible by another's."""
    if not G:
        return []
    R = G[0].ring
    Gmin = []
    for f in sorted(G, key=lambda h: (sum(h.LM), R.order(h.LM))):
        if all(R.monomial_div(f.LM, g.LM) is None for g in Gmin):
            Gmin.append(f)
    return Gmin


def interreduce(G):
    """Reduced Groebner basis from a minimal one (global orders only)."""
    Gred = []
    for i in range(len(G)):
        g = G[i].rem(G[:i] + G[i + 1:])
        Gred.append(g.monic())
    return Gred


def _check_budget(p, max_degree, ordering):
    degree = total_degree(p) if ordering == GLOBAL else sum(p.LM)
    if degree > max_degree:
        raise ResourceLimitError(
            f"basis element of degree {degree} exceeds the degree budget {max_degree}"
        )


def buchberger(F, ordering=GLOBAL, max_degree=None):
    """Standard basis of the polynomials ``F`` (Buchberger for global, Mora for local orders)."""
    max_degree = MAX_DEGREE if max_degree is None else max_degree
    local = ordering == LOCAL
    reduce = mora_normal_form if local else (lambda s, G: s.rem(G))

    G = []
    P = set()
    for f in F:
        if not f:
            continue
        _check_budget(f, max_degree, ordering)
        if f.LM == f.ring.zero_monom:
            return [f.ring.one]
        G, P = update(G, P, f.monic(), product_criterion=not local)

    processed = 0
    while P:
        i, j = select(G, P)
        P.remove((i, j))
        processed += 1
        if processed > MAX_PAIRS:
            raise ResourceLimitError(f"more than {MAX_PAIRS} S-pairs without completing the basis")
        s = spoly(G[i], G[j])
        r = reduce(s, G)
        if r:
            _check_budget(r, max_degree, ordering)
            if r.LM == r.ring.zero_monom:
                return [r.ring.one]
            G, P = update(G, P, r.monic(), product_criterion=not local)

    logger.debug(f"Basis completed after {processed} pairs with {len(G)} elements")
    G = minimalize(G)
    if not local:
        G = interreduce(G)
    return G


def groebner_basis(ideal, max_degree=None):
    """Reduced Groebner basis for the global degree order."""
    if ideal.ordering != GLOBAL:
        raise StructuralError("groebner_basis needs the global ordering; use standard_basis_local")
    ring = ideal.ring
    elements = buchberger(list(ideal.generators), GLOBAL, max_degree)
    elements = sorted(elements, key=lambda g: ring.order(g.LM))
    return StandardBasis(elements=tuple(elements), ordering=GLOBAL, is_reduced=True, ring=ring)


def standard_basis_local(ideal, max_degree=None):
    """Minimal standard basis for the local degree order (Mora's tangent cone algorithm)."""
    if ideal.ordering != LOCAL:
        raise StructuralError("standard_basis_local needs the local ordering")
    ring = ideal.ring
    elements = buchberger(list(ideal.generators), LOCAL, max_degree)
    elements = sorted(elements, key=lambda g: (sum(g.LM), g.LM))
    return StandardBasis(elements=tuple(elements), ordering=LOCAL, is_reduced=False, ring=ring)


def standard_basis(ideal, max_degree=None):
    if ideal.ordering == LOCAL:
        return standard_basis_local(ideal, max_degree)
    return groebner_basis(ideal, max_degree)


def count_standard_monomials(leading, nvars):
    """Number of monomials not divisible by any of ``leading``; INFINITE if unbounded."""
    if any(sum(m) == 0 for m in leading):
        return 0
    for i in range(nvars):
        if not any(m[i] > 0 and sum(m) == m[i] for m in leading):
            return INFINITE

    def divisible(mon):
        return any(all(a >= b for a, b in zip(mon, lm)) for lm in leading)

    # Standard monomials form an order ideal; grow it one variable at a time,
    # only raising variables at or after the last one raised.
    count = 0
    stack = [((0,) * nvars, 0)]
    while stack:
        mon, first = stack.pop()
        count += 1
        for j in range(first, nvars):
            child = mon[:j] + (mon[j] + 1,) + mon[j + 1:]
            if not divisible(child):
                stack.append((child, j))
    return count


def colength(ideal, max_degree=None):
    """Dimension over QQ of the quotient by ``ideal`` (local ring for local ideals)."""
    basis = ideal if isinstance(ideal, StandardBasis) else standard_basis(ideal, max_degree)
    return count_standard_monomials(basis.leading_monomials, len(basis.variables))


def ideal_dimension(ideal, max_degree=None):
    """Krull dimension from maximal independent sets of the leading-term ideal.

    Returns -1 for the unit ideal (empty zero set).
    """
    basis = ideal if isinstance(ideal, StandardBasis) else groebner_basis(ideal, max_degree)
    nvars = len(basis.variables)
    if basis.is_unit:
        return -1
    leading = basis.leading_monomials
    for size in range(nvars, -1, -1):
        for subset in itertools.combinations(range(nvars), size):
            free = set(subset)
            # independent: no leading monomial lives in the subring of `subset`
            if not any(all(e == 0 or i in free for i, e in enumerate(m)) for m in leading):
                return size
    return 0


def jacobian_minors(eqs, variables, k):
    """All k x k minors of the Jacobian matrix of ``eqs`` with respect to ``variables``."""
    if not eqs:
        return []
    ring = eqs[0].ring
    jac = [[differentiate(f, v) for v in variables] for f in eqs]
    if k == 0:
        return [ring.one]
    if k > len(eqs) or k > len(variables):
        return []
    K = ring.to_domain()
    minors = []
    for rows in itertools.combinations(range(len(eqs)), k):
        for cols in itertools.combinations(range(len(variables)), k):
            block = [[jac[r][c] for c in cols] for r in rows]
            det = DomainMatrix(block, (k, k), K).det()
            if det:
                minors.append(ring(det))
    return minors


def singular_locus_ideal(eqs, expected_codim):
    """Equations plus all expected_codim-minors of their Jacobian."""
    eqs = [e for e in eqs]
    if not eqs:
        raise StructuralError("singular_locus_ideal needs at least one equation")
    names = variable_names(eqs[0])
    minors = jacobian_minors(eqs, names, expected_codim)
    return Ideal(tuple(eqs) + tuple(minors), ordering_of(eqs[0]))


def _require_germ(f):
    if not f:
        raise DomainError("the zero polynomial does not define a hypersurface germ")
    if f.coeff(1) != 0:
        raise DomainError(f"{render(f)} is a unit at the origin, not a singular germ")


def milnor_hypersurface(f, at_origin=True, max_degree=None):
    """Milnor number of the hypersurface ``f``; INFINITE for non-isolated singularities.

    With ``at_origin`` false the Jacobian colength is taken in the polynomial
    ring, i.e. the sum of the Milnor numbers of all critical points.
    """
    if at_origin:
        _require_germ(f)
    elif total_degree(f) <= 0:
        raise DomainError(f"{render(f)} is constant and defines no hypersurface")
    jac = [differentiate(f, v) for v in variable_names(f)]
    jac = [j for j in jac if j] or [f.ring.zero]
    if not any(jac):
        return INFINITE
    ordering = LOCAL if at_origin else GLOBAL
    return colength(Ideal(tuple(jac), ordering), max_degree)


def milnor_on_hyperplane(f, name, max_degree=None):
    """Sum of the Milnor numbers of ``f`` over its critical points on ``f = 0, name = 0``.

    The colength of J(f) + (t^k, f^k) grows with k until the powers of t and f
    fall inside the local Jacobian ideals; the settled value is the sum.
    Returns INFINITE when it never settles and ``f = 0`` carries a critical curve.
    """
    if total_degree(f) <= 0:
        raise DomainError(f"{render(f)} is constant and defines no hypersurface")
    f = with_ordering(f, GLOBAL)
    t = gen(f.ring, name)
    jac = tuple(j for j in (differentiate(f, v) for v in variable_names(f)) if j)
    previous = None
    for k in range(1, MAX_FIBER_POWER + 1):
        sliced = groebner_basis(Ideal(jac + (t ** k,), GLOBAL), max_degree)
        if sliced.is_unit:
            return 0
        power = f.ring.one
        for _ in range(k):
            power = normal_form(power * f, sliced)
        length = colength(Ideal(jac + (t ** k, power), GLOBAL), max_degree)
        if length == INFINITE:
            return INFINITE
        if length == previous:
            return length
        previous = length
    if ideal_dimension(Ideal(jac + (f,), GLOBAL), max_degree) > 0:
        return INFINITE
    raise ResourceLimitError(
        f"Jacobian colength along {name} = 0 did not settle within power {MAX_FIBER_POWER}")


def milnor_icis_le_greuel(fs, max_degree=None):
    """Milnor number of the ICIS ``fs`` at the origin by the Le-Greuel recursion.

    mu(f_1..f_k) + mu(f_1..f_{k-1}) = colength(<f_1..f_{k-1}> + k-minors of Jac(f_1..f_k))
    """
    fs = list(fs)
    if not fs:
        raise StructuralError("milnor_icis_le_greuel needs at least one equation")
    for f in fs:
        _require_germ(f)
    names = variable_names(fs[0])
    if len(fs) > len(names):
        raise DomainError(f"{len(fs)} equations in {len(names)} variables do not define an ICIS")
    previous = 0
    for k in range(1, len(fs) + 1):
        minors = jacobian_minors(fs[:k], names, k)
        gens = tuple(fs[:k - 1]) + tuple(minors)
        if not gens:
            gens = (fs[0].ring.zero,)
        length = colength(Ideal(gens, LOCAL), max_degree)
        if length == INFINITE:
            raise DomainError(f"non-isolated singularity at recursion level {k}")
        current = length - previous
        if current < 0:
            raise DomainError(f"negative Milnor number at recursion level {k}; equations are not generic")
        logger.debug(f"Le-Greuel level {k}: colength {length}, mu {current}")
        previous = current
    return previous


def polar_curve(f, ystar_eqs, bend, max_degree=None):
    """Unsaturated polar locus of f with respect to the bent projection on Y*.

    Args:
        f: function on Y*
        ystar_eqs: equations g_1..g_m of Y* (may be empty)
        bend: rationals a_1..a_{N-1}; L = x_1 - sum a_i x_{i+1}

    Returns:
        (ideal, is_generic) with is_generic true iff the locus has dimension <= 1.
    """
    names = variable_names(f)
    if len(bend) != len(names) - 1:
        raise StructuralError(f"bend needs {len(names) - 1} entries, got {len(bend)}")
    ring = f.ring
    L = gen(ring, names[0])
    for a, name in zip(bend, names[1:]):
        L -= ring(rational(a)) * gen(ring, name)
    ystar = [to_ring(g, names, ordering_of(f)) for g in ystar_eqs]
    size = len(ystar) + 2
    minors = jacobian_minors(ystar + [L, f], names, size)
    ideal = Ideal(tuple(ystar) + tuple(minors) if (ystar or minors) else (ring.zero,), GLOBAL)
    dimension = ideal_dimension(ideal, max_degree)
    logger.debug(f"Polar locus for bend {list(bend)} has dimension {dimension}")
    return ideal, dimension <= 1


def radical_contains(ideal, f, max_degree=None):
    """Whether ``f`` lies in the radical of ``ideal`` (Rabinowitsch trick)."""
    names = ideal.variables
    fresh = '_rab'
    while fresh in names:
        fresh += '_'
    extended = names + (fresh,)
    ring = poly_ring(extended)
    gens = [to_ring(g, extended, GLOBAL) for g in ideal.generators]
    y = gen(ring, fresh)
    gens.append(ring.one - y * to_ring(f, extended, GLOBAL))
    return groebner_basis(Ideal(tuple(gens), GLOBAL), max_degree).is_unit


def ideal_contains(ideal, f, max_degree=None):
    """Membership in the polynomial ring (global) or local ring (local ideals)."""
    return standard_basis(ideal, max_degree).contains(f)


__all__ = [
    'PolyElement', 'Ideal', 'StandardBasis', 'INFINITE', 'MAX_DEGREE', 'GLOBAL', 'LOCAL',
    'spoly', 'normal_form', 'mora_normal_form', 'buchberger', 'groebner_basis',
    'standard_basis_local', 'standard_basis', 'colength', 'count_standard_monomials',
    'ideal_dimension', 'jacobian_minors', 'singular_locus_ideal', 'milnor_hypersurface',
    'milnor_on_hyperplane', 'milnor_icis_le_greuel', 'polar_curve', 'radical_contains', 'ideal_contains',
]
