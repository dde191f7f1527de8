import math

import numpy as np
import pytest
from esv.fuzzy import (
    CRISP, InvalidMembershipMode, NonFiniteObservation, Trapezoidal, membership
)
from esv.models import Grade, GradeVector, InputError, build_default_grade_tables


def _table(name: str):
    return next(table for table in build_default_grade_tables() if table.sub_factor == name)


def test_crisp_is_one_hot() -> None:
    table = _table('Per capita GDP')

    assert membership(10, table) == GradeVector.crisp(Grade.top)
    assert membership(10, table, CRISP) == GradeVector.crisp(table.classify(10))


def test_crisp_descending() -> None:
    table = _table('Density of population')

    assert membership(0.5, table) == GradeVector.crisp(Grade.excellent)
    assert membership(4.5, table) == GradeVector.crisp(Grade.very_low)


def test_trapezoidal_breakpoint_is_split() -> None:
    theta = membership(6, _table('Per capita GDP'), Trapezoidal(0.5))

    assert theta[Grade.top] == pytest.approx(0.5)
    assert theta[Grade.middle] == pytest.approx(0.5)


def test_trapezoidal_outside_bands_is_crisp() -> None:
    table = _table('Per capita GDP')
    assert membership(9, table, Trapezoidal(0.5)) == GradeVector.crisp(Grade.top)


def test_trapezoidal_moves_towards_better_grade() -> None:
    table = _table('Per capita GDP')
    values = np.linspace(5.6, 6.4, 9)

    tops = [membership(float(v), table, Trapezoidal(0.5))[Grade.top] for v in values]
    assert tops == sorted(tops)
    assert tops[0] == pytest.approx(0.1)
    assert tops[-1] == pytest.approx(0.9)


def test_trapezoidal_partition_of_unity() -> None:
    rng = np.random.default_rng(3)
    for table in build_default_grade_tables():
        low, high = table.bounds[0], table.bounds[-1]
        for value in rng.uniform(low - 1, high + 1, size=200):
            theta = membership(float(value), table, Trapezoidal(1.0))
            assert math.fsum(theta) == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize('width', [0, -0.5, 1.5, float('nan')])
def test_invalid_width(width: float) -> None:
    with pytest.raises(InvalidMembershipMode):
        Trapezoidal(width)


@pytest.mark.parametrize('value', [float('inf'), float('-inf'), float('nan')])
def test_non_finite_observation(value: float) -> None:
    with pytest.raises(NonFiniteObservation) as info:
        membership(value, _table('Per capita GDP'))
    assert isinstance(info.value, InputError)


def test_mode_data() -> None:
    assert CRISP.to_data() == 'crisp'
    assert Trapezoidal(0.25).to_data() == {'trapezoidal': 0.25}


def test_trapezoidal_converges_to_crisp() -> None:
    rng = np.random.default_rng(23)
    widths = (1.0, 0.1, 0.01, 1e-6)

    for table in build_default_grade_tables():
        low, high = table.bounds[0], table.bounds[-1]
        for value in rng.uniform(low - 1, high + 1, size=200):
            crisp = membership(float(value), table).as_array()
            errors = []
            for width in widths:
                fuzzy = membership(float(value), table, Trapezoidal(width)).as_array()
                errors.append(float(np.abs(fuzzy - crisp).max()))

            assert errors == sorted(errors, reverse=True)
            if min(abs(value - bound) for bound in table.bounds) > 1e-4:
                assert errors[-1] == 0
