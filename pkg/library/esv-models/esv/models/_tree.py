from enum import Enum
from typing import Any, Dict, Iterator, List, Mapping, Tuple

import attrs
from typing_extensions import Final, Self

from ._errors import InvalidFactorTree, ParseError

__all__ = (
    'Direction',
    'Grade',
    'SubFactor',
    'Factor',
    'FactorTree',
)


FACTOR_COUNT: Final[int] = 5
SUB_FACTOR_COUNT: Final[int] = 4


class Grade(Enum):
    """The five evaluation grades, ordered from best to worst.

    The value is the column index used by grade vectors and relation
    matrices.
    """

    excellent = 0
    top = 1
    middle = 2
    low = 3
    very_low = 4

    @property
    def label(self) -> str:
        """The human-readable label, as printed in the grade tables."""
        return _GRADE_LABELS[self]


_GRADE_LABELS = {
    Grade.excellent: 'Excellent',
    Grade.top: 'Top',
    Grade.middle: 'Middle',
    Grade.low: 'Low',
    Grade.very_low: 'Very low',
}


class Direction(Enum):
    higher_is_better = 'higher_is_better'
    lower_is_better = 'lower_is_better'


@attrs.define(frozen=True, kw_only=True)
class SubFactor:
    """A leaf of the evaluation hierarchy.

    Attributes:
        name: Unique name of the sub-factor.
        unit: Unit that observations of this sub-factor are given in.
        direction: Whether a higher observation is better or worse.
    """

    name: str
    unit: str
    direction: Direction

    @classmethod
    def from_data(cls, data: Mapping[str, Any], field: str = 'sub_factor') -> Self:
        try:
            return cls(
                name=str(data['name']),
                unit=str(data['unit']),
                direction=Direction(data['direction']),
            )
        except KeyError as exc:
            raise ParseError(f'{field}.{exc.args[0]}', 'missing field') from None
        except ValueError:
            raise ParseError(
                f'{field}.direction', f'unknown direction {data["direction"]!r}'
            ) from None

    def to_data(self) -> Dict[str, Any]:
        return {'name': self.name, 'unit': self.unit, 'direction': self.direction.value}


@attrs.define(frozen=True, kw_only=True)
class Factor:
    name: str
    sub_factors: Tuple[SubFactor, ...] = attrs.field(converter=tuple)


@attrs.define(frozen=True)
class FactorTree:
    """The five-factor, twenty sub-factor evaluation hierarchy.

    The order of factors and sub-factors is significant: it is the order of
    the indicator columns in evaluation matrices and of the rows of relation
    matrices.

    Attributes:
        factors: The five factors in order.
    """

    factors: Tuple[Factor, ...] = attrs.field(converter=tuple)

    _index: Dict[str, Tuple[int, int]] = attrs.field(init=False, repr=False, eq=False)

    def __attrs_post_init__(self) -> None:
        if len(self.factors) != FACTOR_COUNT:
            raise InvalidFactorTree(
                f'Expected {FACTOR_COUNT} factors, got {len(self.factors)}'
            )

        index: Dict[str, Tuple[int, int]] = {}
        for f, factor in enumerate(self.factors):
            if len(factor.sub_factors) != SUB_FACTOR_COUNT:
                raise InvalidFactorTree(
                    f'Factor {factor.name!r} has {len(factor.sub_factors)} '
                    f'sub-factors, expected {SUB_FACTOR_COUNT}'
                )

            for j, sub in enumerate(factor.sub_factors):
                if sub.name in index:
                    raise InvalidFactorTree(f'Duplicate sub-factor name {sub.name!r}')
                index[sub.name] = (f, j)

        # Frozen classes need to go through object.__setattr__ for cached state
        object.__setattr__(self, '_index', index)

    def __iter__(self) -> Iterator[Factor]:
        return iter(self.factors)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def leaves(self) -> List[SubFactor]:
        """Return all sub-factors in column order."""
        return [sub for factor in self.factors for sub in factor.sub_factors]

    def position(self, name: str) -> Tuple[int, int]:
        """Return the factor index and the index within the factor of a sub-factor.

        Raises:
            KeyError: There is no sub-factor with this name.
        """
        return self._index[name]

    def index_of(self, name: str) -> int:
        """Return the flat column index of a sub-factor."""
        f, j = self._index[name]
        return f * SUB_FACTOR_COUNT + j

    def sub_factor(self, name: str) -> SubFactor:
        f, j = self._index[name]
        return self.factors[f].sub_factors[j]

    def factor_of(self, name: str) -> Factor:
        """Return the factor a sub-factor belongs to."""
        return self.factors[self._index[name][0]]

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        try:
            factors = data['factors']
        except KeyError:
            raise ParseError('factors', 'missing field') from None

        return cls([
            Factor(
                name=str(factor['name']),
                sub_factors=[
                    SubFactor.from_data(sub, f'factors[{f}].sub_factors[{j}]')
                    for j, sub in enumerate(factor['sub_factors'])
                ]
            )
            for f, factor in enumerate(factors)
        ])

    def to_data(self) -> Dict[str, Any]:
        return {
            'factors': [
                {
                    'name': factor.name,
                    'sub_factors': [sub.to_data() for sub in factor.sub_factors]
                }
                for factor in self.factors
            ]
        }
