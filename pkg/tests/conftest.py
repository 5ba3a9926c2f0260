import math

import pytest

from chordcut.geometry import make_polygon


@pytest.fixture
def unit_square():
    return make_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def l_polygon():
    return make_polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture
def holed_square():
    return make_polygon([(0, 0), (4, 0), (4, 4), (0, 4)], [[(1, 1), (1, 3), (3, 3), (3, 1)]])


def regular_polygon(k, r=1.0, phase=0.0):
    return make_polygon([(r * math.cos(phase + 2 * math.pi * i / k), r * math.sin(phase + 2 * math.pi * i / k)) for i in range(k)])
