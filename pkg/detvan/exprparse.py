"""
Parsers for polynomial expressions and model files.

Expression grammar (whitespace between tokens is ignored):

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' nat)?
    base   := nat | name | '(' expr ')'

Multiplication must be written out: ``2*x`` parses, ``2x`` does not. ``^``
binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.

A model file is one JSON document:

    {"variables": ["v","w","x","y","z"],
     "matrix": [["v","x"],["w","y"],["-2*x*y","v^2+w^2+z^2"]],
     "options": {"seed": 1, "max_degree": 24}}
"""

import json
import logging
import re
from math import comb

from detvan.errors import DomainError, ParseError, StructuralError
from detvan.polycore import PolyElement, poly_ring, render, to_fraction, total_degree, used_variables, variable_names

logger = logging.getLogger(__name__)

MAX_EXPONENT = 4096
MAX_NESTING = 200

# Bounds on what a single expression may expand to
MAX_TOTAL_DEGREE = 4096
MAX_TERMS = 20000
MAX_COEFFICIENT_BITS = 1 << 20

NAME_RE = re.compile(r'[A-Za-z_][A-Za-z0-9_]*\Z')

# Token kinds
NUM, NAME, OP, END = 'num', 'name', 'op', 'end'


def tokenize(src):
    """Split ``src`` into (kind, value, offset) tokens, ending with an END token."""
    if isinstance(src, bytes):
        try:
            src = src.decode('ascii')
        except UnicodeDecodeError as e:
            raise ParseError("only ASCII characters are supported", offset=e.start)
    tokens = []
    idx = 0
    while idx < len(src):
        c = src[idx]
        if not c.isascii():
            raise ParseError(f"unexpected character {c!r}", offset=len(src[:idx].encode('utf-8')))
        if c.isspace():
            idx += 1
            continue
        if c.isdigit():
            start = idx
            while idx < len(src) and src[idx].isdigit():
                idx += 1
            tokens.append((NUM, int(src[start:idx]), start))
            continue
        if c.isalpha() or c == '_':
            start = idx
            while idx < len(src) and (src[idx].isalnum() or src[idx] == '_') and src[idx].isascii():
                idx += 1
            tokens.append((NAME, src[start:idx], start))
            continue
        if c in '+-*^()':
            tokens.append((OP, c, idx))
            idx += 1
            continue
        raise ParseError(f"unexpected character {c!r}", offset=idx)
    tokens.append((END, None, len(src)))
    return tokens


def _monomial_bound(degree, nvars):
    return comb(degree + nvars, nvars)


def _coefficient_bits(p):
    bits = 0
    for coeff in p.coeffs():
        frac = to_fraction(coeff)
        bits = max(bits, frac.numerator.bit_length(), frac.denominator.bit_length())
    return bits


def _check_power(base, exponent, offset):
    degree = max(total_degree(base), 0) * exponent
    if degree > MAX_TOTAL_DEGREE:
        raise ParseError(f"power has degree {degree}, above {MAX_TOTAL_DEGREE}", offset=offset)
    if len(base) > 1 and _monomial_bound(degree, len(used_variables(base))) > MAX_TERMS:
        raise ParseError(f"power may expand past {MAX_TERMS} terms", offset=offset)
    if _coefficient_bits(base) * exponent > MAX_COEFFICIENT_BITS:
        raise ParseError("power has an oversized coefficient", offset=offset)


def _check_product(a, b, offset):
    degree = max(total_degree(a), 0) + max(total_degree(b), 0)
    if degree > MAX_TOTAL_DEGREE:
        raise ParseError(f"product has degree {degree}, above {MAX_TOTAL_DEGREE}", offset=offset)
    if len(a) * len(b) > MAX_TERMS:
        raise ParseError(f"product may expand past {MAX_TERMS} terms", offset=offset)


class _Parser:
    """Recursive-descent parser evaluating directly into a polynomial ring."""

    def __init__(self, tokens, ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring
        self.gens = dict(zip(variable_names(ring), ring.gens))
        self.depth = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        if token[0] != END:
            self.pos += 1
        return token

    def expect_op(self, op):
        kind, value, offset = self.advance()
        if kind != OP or value != op:
            raise ParseError(f"expected '{op}'", offset=offset)

    def parse(self):
        result = self.expr()
        kind, value, offset = self.peek()
        if kind != END:
            if kind in (NUM, NAME) or (kind == OP and value == '('):
                raise ParseError("missing '*' between factors", offset=offset)
            raise ParseError(f"unexpected {value!r}", offset=offset)
        return result

    def expr(self):
        result = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == OP and value in '+-':
                self.advance()
                rhs = self.term()
                result = result + rhs if value == '+' else result - rhs
            else:
                return result

    def term(self):
        result = self.factor()
        while True:
            kind, value, offset = self.peek()
            if kind == OP and value == '*':
                self.advance()
                rhs = self.factor()
                _check_product(result, rhs, offset)
                result = result * rhs
            else:
                return result

    def factor(self):
        kind, value, offset = self.peek()
        if kind == OP and value == '-':
            self.advance()
            return -self.nested(self.factor, offset)
        base = self.base()
        kind, value, offset = self.peek()
        if kind == OP and value == '^':
            self.advance()
            kind, exponent, offset = self.advance()
            if kind == OP and exponent == '-':
                raise ParseError("negative exponent", offset=offset)
            if kind != NUM:
                raise ParseError("exponent must be a natural number", offset=offset)
            if exponent > MAX_EXPONENT:
                raise ParseError(f"exponent {exponent} exceeds {MAX_EXPONENT}", offset=offset)
            _check_power(base, exponent, offset)
            return base ** exponent
        return base

    def base(self):
        kind, value, offset = self.advance()
        if kind == NUM:
            return self.ring(value)
        if kind == NAME:
            if value not in self.gens:
                raise ParseError(f"unknown variable '{value}'", offset=offset)
            return self.gens[value]
        if kind == OP and value == '(':
            result = self.nested(self.expr, offset)
            self.expect_op(')')
            return result
        if kind == END:
            raise ParseError("unexpected end of input", offset=offset)
        raise ParseError(f"unexpected {value!r}", offset=offset)

    def nested(self, rule, offset):
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ParseError("expression nested too deeply", offset=offset)
        try:
            return rule()
        finally:
            self.depth -= 1


def parse_poly(src, variables):
    """Parse an expression into a polynomial.

    Args:
        src: expression text (str or ASCII bytes)
        variables: ordered variable names, or an existing polynomial ring

    Returns:
        PolyElement in the ring over ``variables``.
    """
    ring = variables if hasattr(variables, 'gens') else poly_ring(variables)
    return _Parser(tokenize(src), ring).parse()


def _check_names(names):
    if not isinstance(names, list) or not names:
        raise StructuralError("'variables' must be a nonempty list of names")
    for name in names:
        if not isinstance(name, str) or not NAME_RE.match(name):
            raise StructuralError(f"invalid variable name {name!r}")
    seen = set()
    for name in names:
        if name in seen:
            raise StructuralError(f"duplicate variable name '{name}'")
        seen.add(name)


def _parse_options(options):
    if options is None:
        return {}
    if not isinstance(options, dict):
        raise StructuralError("'options' must be an object")
    parsed = {}
    for key in ('seed', 'max_degree', 'dimension_hint'):
        if key not in options or options[key] is None:
            continue
        value = options[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise StructuralError(f"option '{key}' must be an integer")
        if key != 'seed' and value < 0:
            raise StructuralError(f"option '{key}' must be a natural number")
        parsed[key] = value
    unknown = sorted(set(options) - {'seed', 'max_degree', 'dimension_hint'})
    if unknown:
        logger.warning(f"Ignoring unknown model options {unknown}")
    return parsed


def parse_model(data):
    """Parse and validate a model file.

    Args:
        data: JSON text as bytes or str, or an already decoded dict

    Returns:
        DetModel with t = 2 (three rows, two columns).
    """
    from detvan.detmodel import DetModel

    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", offset=e.pos)
        except UnicodeDecodeError as e:
            raise ParseError("model file is not valid UTF-8", offset=e.start)
    else:
        doc = data
    if not isinstance(doc, dict):
        raise StructuralError("model file must be a JSON object")

    names = doc.get('variables')
    _check_names(names)

    matrix = doc.get('matrix')
    if not isinstance(matrix, list) or not matrix or not all(isinstance(row, list) for row in matrix):
        raise StructuralError("'matrix' must be a nonempty list of rows")
    cols = len(matrix[0])
    if any(len(row) != cols for row in matrix):
        raise StructuralError("matrix rows have different lengths")
    if len(matrix) != cols + 1:
        raise StructuralError(
            f"shape {len(matrix)}x{cols}: the matrix must have exactly one more row than columns"
        )
    if cols != 2:
        raise StructuralError(
            f"shape {len(matrix)}x{cols}: only 3x2 matrices (Cohen-Macaulay type t = 2) are supported; "
            "larger t is beyond the closed-form theory implemented here"
        )

    ring = poly_ring(names)
    entries = []
    for r, row in enumerate(matrix):
        parsed_row = []
        for c, src in enumerate(row):
            if not isinstance(src, str):
                raise ParseError("matrix entries must be expression strings", row=r, column=c)
            try:
                entry = parse_poly(src, ring)
            except ParseError as e:
                raise ParseError(str(e).split(' (offset')[0], offset=e.offset, row=r, column=c)
            if entry.coeff(1) != 0:
                raise DomainError(
                    f"entry ({r}, {c}) = {render(entry)} does not vanish at the origin"
                )
            parsed_row.append(entry)
        entries.append(tuple(parsed_row))

    options = _parse_options(doc.get('options'))
    logger.debug(f"Parsed {len(entries)}x{cols} model over {names}")
    return DetModel(matrix=tuple(entries), variables=tuple(names), options=options)


def load_model(path):
    """Read and parse a model file from disk."""
    with open(path, 'rb') as f:
        return parse_model(f.read())


def dump_model(model):
    """Canonical JSON text of a model (sorted keys, rendered entries)."""
    doc = {
        'variables': list(model.variables),
        'matrix': [[render(entry) for entry in row] for row in model.matrix],
        'options': dict(sorted(model.options.items())),
    }
    return json.dumps(doc, sort_keys=True)


def parse_int_matrix(data):
    """Parse a JSON integer matrix, either a bare list of rows or {"matrix": [...]}."""
    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", offset=e.pos)
    else:
        doc = data
    if isinstance(doc, dict):
        doc = doc.get('matrix')
    if not isinstance(doc, list) or not all(isinstance(row, list) for row in doc):
        raise StructuralError("expected a list of integer rows")
    width = len(doc[0]) if doc else 0
    for r, row in enumerate(doc):
        if len(row) != width:
            raise StructuralError("matrix rows have different lengths")
        for c, value in enumerate(row):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParseError("matrix entries must be integers", row=r, column=c)
    return doc


__all__ = ['PolyElement', 'tokenize', 'parse_poly', 'parse_model', 'load_model',
           'dump_model', 'parse_int_matrix']
