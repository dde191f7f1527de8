import math
from bisect import bisect_right
from enum import Enum
from typing import Any, Dict, Mapping, Tuple

import attrs
from typing_extensions import Self

from ._errors import InvalidGradeTable, ParseError
from ._tree import Direction, Grade

__all__ = (
    'Orientation',
    'GradeTable',
)


class Orientation(Enum):
    """Which end of the breakpoints the Excellent grade sits at."""

    ascending = 'ascending'
    descending = 'descending'

    @classmethod
    def from_direction(cls, direction: Direction) -> Self:
        if direction is Direction.higher_is_better:
            return cls.ascending
        return cls.descending


def _to_bounds(value: Any) -> Tuple[float, ...]:
    return tuple(float(bound) for bound in value)


@attrs.define(frozen=True, kw_only=True)
class GradeTable:
    """Grade division of one sub-factor into five half-open intervals.

    The four breakpoints are stored in increasing numeric order. The five
    induced intervals cover the real line:

        (-inf, b1), [b1, b2), [b2, b3), [b3, b4), [b4, +inf)

    so every interval includes its lower numeric bound. With an ascending
    orientation the interval at the top is Excellent, with a descending
    orientation the interval at the bottom is.

    Attributes:
        sub_factor: Name of the sub-factor this table grades.
        bounds: The breakpoints b1 < b2 < b3 < b4.
        orientation: Whether Excellent is at the high or the low end.
        note: Provenance of the breakpoints and any normalization applied.
    """

    sub_factor: str
    bounds: Tuple[float, float, float, float] = attrs.field(converter=_to_bounds)
    orientation: Orientation
    note: str = ''

    def __attrs_post_init__(self) -> None:
        if len(self.bounds) != 4:
            raise InvalidGradeTable(
                self.sub_factor, f'expected 4 breakpoints, got {len(self.bounds)}'
            )
        if not all(math.isfinite(bound) for bound in self.bounds):
            raise InvalidGradeTable(self.sub_factor, 'breakpoints must be finite')
        if any(low >= high for low, high in zip(self.bounds, self.bounds[1:])):
            raise InvalidGradeTable(
                self.sub_factor, f'breakpoints {self.bounds} are not strictly increasing'
            )

    def position(self, value: float) -> int:
        """Return the numeric interval index (0 is the lowest) containing a value."""
        return bisect_right(self.bounds, value)

    def grade_at(self, position: int) -> Grade:
        """Convert a numeric interval index into the grade of that interval."""
        if self.orientation is Orientation.ascending:
            return Grade(4 - position)
        return Grade(position)

    def classify(self, value: float) -> Grade:
        """Return the crisp grade of an observation."""
        return self.grade_at(self.position(value))

    def interval(self, grade: Grade) -> Tuple[float, float]:
        """Return the half-open `[low, high)` interval of a grade.

        The open-ended extremes are reported as infinities.
        """
        if self.orientation is Orientation.ascending:
            position = 4 - grade.value
        else:
            position = grade.value

        edges = (-math.inf, *self.bounds, math.inf)
        return edges[position], edges[position + 1]

    @classmethod
    def from_data(
        cls,
        sub_factor: str,
        data: Mapping[str, Any],
        field: str = 'grades'
    ) -> Self:
        try:
            orientation = Orientation(data['orientation'])
            bounds = data['bounds']
        except KeyError as exc:
            raise ParseError(f'{field}.{exc.args[0]}', 'missing field') from None
        except ValueError:
            raise ParseError(
                f'{field}.orientation', f'unknown orientation {data["orientation"]!r}'
            ) from None

        try:
            bounds = _to_bounds(bounds)
        except (TypeError, ValueError):
            raise ParseError(f'{field}.bounds', 'expected a list of numbers') from None

        return cls(
            sub_factor=sub_factor,
            bounds=bounds,
            orientation=orientation,
            note=str(data.get('note', '')),
        )

    def to_data(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'orientation': self.orientation.value,
            'bounds': list(self.bounds),
        }
        if self.note:
            data['note'] = self.note
        return data
