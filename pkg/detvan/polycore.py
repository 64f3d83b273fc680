"""
Exact polynomial arithmetic over the rationals.

Polynomials are sympy ``PolyElement`` values: a sparse map from exponent
tuples to ``QQ`` coefficients attached to a ``PolyRing`` that fixes the
ordered variable list and the term order. This module adds the conveniences
the rest of detvan relies on: rings addressed by variable names, moving
polynomials between rings, name-based substitution and evaluation, univariate
squarefree decomposition and gcd, and a canonical text rendering that the
expression parser reads back.
"""

import logging
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.orderings import MonomialOrder, grevlex
from sympy.polys.polyerrors import GeneratorsError
from sympy.polys.rings import PolyElement, PolyRing

from detvan.errors import DomainError, StructuralError

logger = logging.getLogger(__name__)


class NegDegRevLexOrder(MonomialOrder):
    """Local degree ordering: lower total degree is larger, ties broken as in grevlex."""

    alias = 'negdegrevlex'
    is_global = False

    def __call__(self, monomial):
        return (-sum(monomial), tuple(reversed([-m for m in monomial])))


negdegrevlex = NegDegRevLexOrder()

ORDERINGS = {
    'global_degrevlex': grevlex,
    'local_negdegrevlex': negdegrevlex,
}


def poly_ring(names, ordering='global_degrevlex'):
    """Return the polynomial ring over QQ in the given variable names.

    Args:
        names: ordered variable names
        ordering: 'global_degrevlex' or 'local_negdegrevlex'

    Returns:
        PolyRing; sympy caches rings so equal arguments give the same object.
    """
    names = tuple(names)
    if not names:
        raise StructuralError("a polynomial ring needs at least one variable")
    if len(set(names)) != len(names):
        raise StructuralError(f"duplicate variable names in {list(names)}")
    try:
        order = ORDERINGS[ordering]
    except KeyError:
        raise StructuralError(f"unknown term ordering '{ordering}'")
    return PolyRing(names, QQ, order)


def variable_names(p_or_ring):
    ring = p_or_ring.ring if isinstance(p_or_ring, PolyElement) else p_or_ring
    return tuple(str(s) for s in ring.symbols)


def gen(ring, name):
    """Generator of ``ring`` called ``name``."""
    names = variable_names(ring)
    if name not in names:
        raise StructuralError(f"unknown variable '{name}' (ring has {list(names)})")
    return ring.gens[names.index(name)]


def rational(value):
    """Convert an int, Fraction, string like '3/4' or QQ element into QQ."""
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        frac = Fraction(value)
        return QQ(frac.numerator, frac.denominator)
    return QQ.convert(value)


def to_fraction(value):
    value = QQ.convert(value)
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def with_ordering(p, ordering):
    """The same polynomial in the ring with the same variables but another term order."""
    return p.set_ring(poly_ring(variable_names(p), ordering))


def ordering_of(p_or_ring):
    ring = p_or_ring.ring if isinstance(p_or_ring, PolyElement) else p_or_ring
    return 'local_negdegrevlex' if ring.order == negdegrevlex else 'global_degrevlex'


def to_ring(p, names, ordering=None):
    """Move ``p`` into the ring over ``names`` (reordering, adding or dropping unused variables)."""
    target = poly_ring(names, ordering or ordering_of(p))
    try:
        return p.set_ring(target)
    except GeneratorsError:
        used = used_variables(p)
        missing = [name for name in used if name not in names]
        raise StructuralError(f"cannot drop variables {missing} that occur in {render(p)}")


def used_variables(p):
    """Names of the variables that actually occur in ``p``, in ring order."""
    names = variable_names(p)
    if not p:
        return ()
    degrees = p.degrees()
    return tuple(name for name, d in zip(names, degrees) if d > 0)


def _check_same_ring(p, q):
    if p.ring != q.ring:
        raise StructuralError(
            f"variable-list mismatch: {list(variable_names(p))} vs {list(variable_names(q))}"
        )


def arith(p, q, op):
    """Exact add, sub or mul of two polynomials over the same variable list."""
    _check_same_ring(p, q)
    if op == 'add':
        return p + q
    if op == 'sub':
        return p - q
    if op == 'mul':
        return p * q
    raise StructuralError(f"unknown arithmetic operation '{op}'")


def differentiate(p, var):
    """Formal partial derivative of ``p`` with respect to the variable named ``var``."""
    return p.diff(gen(p.ring, var))


def substitute(p, bindings):
    """Simultaneously replace variables of ``p`` by polynomials.

    Args:
        p: polynomial
        bindings: map name -> polynomial; values may live in p's ring or in a ring
            that introduces new variables

    Returns:
        The composed polynomial over p's variables followed by any newly
        introduced variables. Bound variables stay in the variable list; use
        ``to_ring`` to drop them once they no longer occur.

    A value from p's own ring may use any of p's variables. A value from a
    foreign ring may only introduce fresh names; reusing one of p's names
    there is ambiguous and rejected.
    """
    names = variable_names(p)
    for name in bindings:
        if name not in names:
            raise StructuralError(f"cannot bind unknown variable '{name}'")

    introduced = []
    for name, value in bindings.items():
        if not isinstance(value, PolyElement) or value.ring == p.ring:
            continue
        for other in used_variables(value):
            if other in names:
                raise StructuralError(
                    f"binding for '{name}' introduces '{other}', which collides with an original variable"
                )
            if other not in introduced:
                introduced.append(other)

    target_names = names + tuple(introduced)
    base = p if not introduced else to_ring(p, target_names, ordering_of(p))
    ring = base.ring
    replacements = []
    for name, value in bindings.items():
        if isinstance(value, PolyElement):
            value = to_ring(value, target_names, ordering_of(p))
        else:
            value = ring(rational(value))
        replacements.append((gen(ring, name), value))
    if not replacements:
        return base
    return base.compose(replacements)


def evaluate_rational(p, point):
    """Exact value of ``p`` at a rational point binding every variable."""
    names = variable_names(p)
    missing = [name for name in names if name not in point]
    if missing:
        raise StructuralError(f"unbound variables {missing} in evaluation")
    value = QQ.zero
    for monom, coeff in p.iterterms():
        term = coeff
        for name, exponent in zip(names, monom):
            if exponent:
                term *= rational(point[name]) ** exponent
        value += term
    return value


def specialize(p, bindings):
    """Evaluate some variables at rational values, dropping them from the ring.

    Returns a polynomial in the remaining variables, or a QQ constant when no
    variable remains.
    """
    if not bindings:
        return p
    pairs = [(gen(p.ring, name), rational(value)) for name, value in bindings.items()]
    return p.evaluate(pairs)


def _univariate_name(p):
    used = used_variables(p)
    if len(used) > 1:
        raise StructuralError(f"expected a univariate polynomial, got variables {list(used)}")
    if used:
        return used[0]
    return variable_names(p)[0]


def as_univariate(p):
    """Move a polynomial that involves at most one variable into its own one-variable ring."""
    name = _univariate_name(p)
    return to_ring(p, (name,), ordering='global_degrevlex'), name


def squarefree_decompose(p):
    """Squarefree decomposition of a nonzero univariate polynomial.

    Returns:
        list of (factor, multiplicity) with monic, squarefree, pairwise coprime
        factors in p's ring, ordered by decreasing multiplicity, such that
        LC(p) * prod(factor**multiplicity) == p.
    """
    if not p:
        raise DomainError("squarefree decomposition of the zero polynomial")
    u, name = as_univariate(p)
    _, factors = u.sqf_list()
    names = variable_names(p)
    result = [(to_ring(f.monic(), names, ordering_of(p)), k)
              for f, k in factors if f.degree() > 0]
    x = gen(p.ring, name)
    result.sort(key=lambda fk: (-fk[1], fk[0].degree(x)))
    return result


def gcd_uni(p, q):
    """Monic greatest common divisor of two univariate polynomials in the same variable."""
    _check_same_ring(p, q)
    if not p and not q:
        raise DomainError("gcd of two zero polynomials")
    used = set(used_variables(p)) | set(used_variables(q))
    if len(used) > 1:
        raise StructuralError(f"gcd_uni needs one shared variable, got {sorted(used)}")
    if not q:
        return p.monic()
    if not p:
        return q.monic()
    return p.gcd(q).monic()


def total_degree(p):
    if not p:
        return -1
    return max(sum(m) for m in p.itermonoms())


def _render_coefficient(coeff, is_constant_term):
    frac = to_fraction(coeff)
    magnitude = abs(frac)
    text = str(magnitude.numerator) if magnitude.denominator == 1 else f"{magnitude.numerator}/{magnitude.denominator}"
    if magnitude == 1 and not is_constant_term:
        return ''
    return text


def render(p):
    """Canonical text of ``p``: grevlex-descending terms, '^' powers, explicit '*'.

    Integer-coefficient output is accepted verbatim by ``exprparse.parse_poly``.
    """
    if isinstance(p, PolyElement):
        names = variable_names(p)
        terms = p.terms(order=grevlex)
    else:
        return str(to_fraction(p))
    if not terms:
        return '0'
    pieces = []
    for index, (monom, coeff) in enumerate(terms):
        factors = []
        for name, exponent in zip(names, monom):
            if exponent == 1:
                factors.append(name)
            elif exponent > 1:
                factors.append(f"{name}^{exponent}")
        negative = to_fraction(coeff) < 0
        coeff_text = _render_coefficient(coeff, not factors)
        body = '*'.join(([coeff_text] if coeff_text else []) + factors)
        if index == 0:
            pieces.append(('-' if negative else '') + body)
        else:
            pieces.append(('-' if negative else '+') + body)
    return ''.join(pieces)
