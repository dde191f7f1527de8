import math

import numpy as np
import pytest
from esv.models import (
    Grade, GradeTable, InvalidGradeTable, Orientation, ParseError,
    build_default_factor_tree, build_default_grade_tables
)


def _tables():
    return {table.sub_factor: table for table in build_default_grade_tables()}


def test_one_table_per_leaf() -> None:
    tree = build_default_factor_tree()
    tables = build_default_grade_tables()

    assert [table.sub_factor for table in tables] == [sub.name for sub in tree.leaves()]


@pytest.mark.parametrize('name,bounds,orientation', [
    ('Per capita GDP', (0.6, 4, 6, 14), Orientation.ascending),
    ('Proportion of ageing population', (4, 6, 8, 12), Orientation.descending),
    ('Hydropower supply coverage', (80, 90, 95, 100), Orientation.ascending),
])
def test_transcribed_bounds(name: str, bounds, orientation: Orientation) -> None:
    table = _tables()[name]

    assert table.bounds == bounds
    assert table.orientation is orientation


@pytest.mark.parametrize('name,value,grade', [
    ('Per capita GDP', 10, Grade.top),
    ('Per capita GDP', 14, Grade.excellent),
    ('Per capita GDP', 25, Grade.excellent),
    ('Per capita GDP', 0.1, Grade.very_low),
    ('Proportion of ageing population', 3, Grade.excellent),
    ('Proportion of ageing population', 4, Grade.top),
    ('Proportion of ageing population', 12, Grade.very_low),
    ('Hydropower supply coverage', 100, Grade.excellent),
    ('Hydropower supply coverage', 99.9, Grade.top),
    ('GDP share of tourism income', 15, Grade.top),
    ('Density of population', 1.0, Grade.top),
    ('Density of population', 0.999, Grade.excellent),
    ('Density of population', 4.0, Grade.very_low),
])
def test_classify(name: str, value: float, grade: Grade) -> None:
    assert _tables()[name].classify(value) is grade


def test_sampled_partition() -> None:
    rng = np.random.default_rng(20)

    for table in build_default_grade_tables():
        low, high = table.bounds[0], table.bounds[-1]
        span = high - low
        samples = rng.uniform(low - span, high + span, size=1000)

        for value in samples:
            matches = [
                grade for grade in Grade
                if table.interval(grade)[0] <= value < table.interval(grade)[1]
            ]
            assert matches == [table.classify(value)]


def test_intervals_cover_the_line() -> None:
    for table in build_default_grade_tables():
        edges = sorted(table.interval(grade) for grade in Grade)

        assert edges[0][0] == -math.inf
        assert edges[-1][1] == math.inf
        for (_, high), (low, _) in zip(edges, edges[1:]):
            assert high == low


class TestValidation:
    def test_count(self) -> None:
        with pytest.raises(InvalidGradeTable):
            GradeTable(sub_factor='x', bounds=(1, 2, 3), orientation=Orientation.ascending)

    def test_not_increasing(self) -> None:
        with pytest.raises(InvalidGradeTable):
            GradeTable(sub_factor='x', bounds=(1, 3, 2, 4), orientation=Orientation.ascending)

    def test_infinite(self) -> None:
        with pytest.raises(InvalidGradeTable):
            GradeTable(
                sub_factor='x', bounds=(1, 2, 3, math.inf), orientation=Orientation.ascending
            )

    def test_unknown_orientation(self) -> None:
        with pytest.raises(ParseError) as info:
            GradeTable.from_data('x', {'orientation': 'sideways', 'bounds': [1, 2, 3, 4]})
        assert info.value.field == 'grades.orientation'

    def test_missing_bounds(self) -> None:
        with pytest.raises(ParseError) as info:
            GradeTable.from_data('x', {'orientation': 'ascending'})
        assert info.value.field == 'grades.bounds'


def test_round_trip() -> None:
    for table in build_default_grade_tables():
        again = GradeTable.from_data(table.sub_factor, table.to_data())
        assert again == table
