import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detvan.errors import DomainError, ParseError, StructuralError
from detvan.exprparse import (
    MAX_EXPONENT, MAX_TOTAL_DEGREE, dump_model, parse_int_matrix, parse_model, parse_poly, tokenize,
)
from detvan.polycore import poly_ring

from conftest import data_path


def test_precedence_and_unary_minus():
    ring = poly_ring(('x', 'y'))
    x, y = ring.gens
    assert parse_poly('-x^2', ring) == -x ** 2
    assert parse_poly('2*x+3*y*x', ring) == 2 * x + 3 * x * y
    assert parse_poly('(x+y)^2 - x*(x+2*y)', ring) == y ** 2
    assert parse_poly('--x', ring) == x


def test_missing_multiplication_reports_offset():
    with pytest.raises(ParseError) as info:
        parse_poly('2x', ['x'])
    assert info.value.offset == 1
    assert "missing '*'" in str(info.value)


@pytest.mark.parametrize("src,offset,message", [
    ('x^-1', 2, 'negative exponent'),
    ('x+q', 2, "unknown variable 'q'"),
    ('x+', 2, 'unexpected end of input'),
    ('x $ y', 2, 'unexpected character'),
])
def test_parse_errors(src, offset, message):
    with pytest.raises(ParseError) as info:
        parse_poly(src, ['x', 'y'])
    assert info.value.offset == offset
    assert message in str(info.value)


def test_exponent_cap():
    with pytest.raises(ParseError):
        parse_poly(f'x^{MAX_EXPONENT + 1}', ['x'])


def test_non_ascii_is_rejected():
    with pytest.raises(ParseError):
        parse_poly('x·y', ['x', 'y'])


def test_tokenize_ends_with_end_token():
    tokens = tokenize('x + 12')
    assert tokens[-1][0] == 'end'
    assert tokens[1] == ('op', '+', 2)
    assert tokens[2] == ('num', 12, 4)


def test_parse_threefold_model(threefold_model):
    assert threefold_model.variables == ('v', 'w', 'x', 'y', 'z')
    assert threefold_model.N == 5
    assert threefold_model.n == 3
    assert threefold_model.options == {'seed': 1}


def test_model_shape_errors():
    with pytest.raises(StructuralError, match='one more row'):
        parse_model({'variables': ['x', 'y'], 'matrix': [['x', 'y'], ['y', 'x']]})
    with pytest.raises(StructuralError, match='t = 2'):
        parse_model({'variables': ['x'], 'matrix': [['x', 'x', 'x']] * 4})


def test_model_entry_error_carries_position():
    doc = {'variables': ['x', 'y'], 'matrix': [['x', 'y'], ['y', '2y'], ['x', 'x']]}
    with pytest.raises(ParseError) as info:
        parse_model(doc)
    assert (info.value.row, info.value.column, info.value.offset) == (1, 1, 1)


def test_model_entries_must_vanish_at_origin():
    with pytest.raises(DomainError):
        parse_model({'variables': ['x', 'y'], 'matrix': [['x', '1+y'], ['y', 'x'], ['x', 'y']]})


def test_duplicate_variables():
    with pytest.raises(StructuralError, match='duplicate'):
        parse_model({'variables': ['x', 'x'], 'matrix': [['x', 'x'], ['x', 'x'], ['x', 'x']]})


def test_invalid_json_offset():
    with pytest.raises(ParseError) as info:
        parse_model('{"variables": [}')
    assert info.value.offset == 15


def test_dump_model_round_trip(threefold_model):
    text = dump_model(threefold_model)
    again = parse_model(text)
    assert again.matrix == threefold_model.matrix
    assert dump_model(again) == text
    assert json.loads(text)['matrix'][2] == ['-2*x*y', 'v^2+w^2+z^2']


def test_parse_int_matrix():
    with open(data_path('matrices', 'snf_example.json')) as f:
        assert parse_int_matrix(f.read()) == [[2, 0], [0, 3]]
    assert parse_int_matrix([[1, 2]]) == [[1, 2]]
    with pytest.raises(ParseError):
        parse_int_matrix([[1, 2.5]])
    with pytest.raises(StructuralError):
        parse_int_matrix([[1, 2], [3]])


def test_nested_power_is_rejected_before_expansion():
    with pytest.raises(ParseError):
        parse_poly('((x+y+z+1)^64)^64', ['x', 'y', 'z'])
    with pytest.raises(ParseError, match='terms'):
        parse_poly('(x+y+z+1)^64', ['x', 'y', 'z'])
    with pytest.raises(ParseError, match='degree'):
        parse_poly('(x*y)^3000', ['x', 'y'])


def test_degree_cap_allows_boundary():
    ring = poly_ring(('x',))
    x, = ring.gens
    assert parse_poly(f'x^{MAX_TOTAL_DEGREE}', ring) == x ** MAX_TOTAL_DEGREE
    with pytest.raises(ParseError, match='degree') as info:
        parse_poly(f'x^{MAX_TOTAL_DEGREE}*x', ring)
    assert info.value.offset == len(f'x^{MAX_TOTAL_DEGREE}')


def test_product_term_cap():
    with pytest.raises(ParseError, match='terms'):
        parse_poly('(x+1)^200*(y+1)^200', ['x', 'y'])


_expression_text = st.text(alphabet='xyz0123456789+-*^() ', max_size=40)


@settings(max_examples=300, deadline=None)
@given(_expression_text)
def test_parser_is_total(src):
    try:
        result = parse_poly(src, ['x', 'y', 'z'])
    except ParseError:
        return
    assert result.ring.symbols == poly_ring(('x', 'y', 'z')).symbols


def test_constant_tower_is_rejected():
    with pytest.raises(ParseError, match='coefficient'):
        parse_poly('((9^4096)^4096)^4096', ['x'])
    assert parse_poly('2^10', ['x']) == poly_ring(('x',))(1024)
