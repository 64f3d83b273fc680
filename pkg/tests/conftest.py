import os

import pytest

from detvan.exprparse import load_model, parse_model
from detvan.polycore import poly_ring

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data')


def data_path(*parts):
    return os.path.join(DATA_DIR, *parts)


@pytest.fixture
def threefold_model():
    return load_model(data_path('models', 'seven_point_threefold.json'))


@pytest.fixture
def cone_model():
    return load_model(data_path('models', 'rational_normal_cone.json'))


@pytest.fixture
def isolated_model():
    return load_model(data_path('models', 'isolated_a1.json'))


@pytest.fixture
def swapped_threefold_model():
    return parse_model({
        'variables': ['v', 'w', 'x', 'y', 'z'],
        'matrix': [['x', 'v'], ['y', 'w'], ['v^2+w^2+z^2', '-2*x*y']],
    })


@pytest.fixture
def xyz():
    return poly_ring(('x', 'y', 'z'))


@pytest.fixture
def xyz_local():
    return poly_ring(('x', 'y', 'z'), 'local_negdegrevlex')
