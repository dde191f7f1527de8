import logging
import math
from typing import Any, Dict, Mapping, Sequence, Tuple

import attrs
import numpy as np
from esv.models import ParseError
from typing_extensions import Final, Self

from ._errors import (
    InvalidDepth, InvalidUseMatrix, NegativeCost, ShapeMismatch, ZeroArea, ZeroQ
)

__all__ = (
    'Pollutant',
    'MarineInputs',
    'climate_regulation',
    'pollution_control',
    'landscape_value',
    'fishery_value',
)


_log = logging.getLogger(__name__)

# Coefficients applied to the per-area costs of fixing and of releasing CO2.
FIXING_COEFFICIENT: Final[float] = 1.63
RELEASING_COEFFICIENT: Final[float] = 1.19


def _nonnegative(name: str, value: float) -> float:
    if not math.isfinite(value) or value < 0:
        raise NegativeCost(name, value)
    return value


def climate_regulation(cost1: float, cost2: float) -> float:
    """Value of climate regulation per unit area.

    Parameters:
        cost1: Cost of fixing CO2, $/m²·a.
        cost2: Cost of releasing CO2, $/m²·a.

    Raises:
        NegativeCost: One of the costs is negative.

    Returns:
        The value in $/m²·a.
    """
    _nonnegative('cost1', cost1)
    _nonnegative('cost2', cost2)

    return FIXING_COEFFICIENT * cost1 + RELEASING_COEFFICIENT * cost2


@attrs.define(frozen=True)
class Pollutant:
    """A pollutant the sea area can absorb.

    Attributes:
        capacity: Amount absorbed, ton/a.
        treatment_cost: Cost of treating the same amount artificially, $/ton.
    """

    capacity: float = attrs.field(converter=float)
    treatment_cost: float = attrs.field(converter=float)

    def __attrs_post_init__(self) -> None:
        _nonnegative('capacity', self.capacity)
        _nonnegative('treatment_cost', self.treatment_cost)


def pollution_control(
    pollutants: Sequence[Pollutant],
    q: float,
    depth: float,
    area: float
) -> float:
    """Value of pollution treatment and control per unit area.

    The avoided treatment cost `sum(X * C)`, normalized by `q`, is the value
    per unit volume. Multiplied by the depth it becomes the value of the
    water column, which is divided by the sea area.

    Parameters:
        pollutants: The pollutants absorbed.
        q: Normalization constant of the avoided treatment cost; has no default.
        depth: Mean depth of the sea area, m.
        area: The sea area, m².

    Raises:
        ZeroQ: `q` is not positive.
        ZeroArea: `area` is not positive.
        InvalidDepth: `depth` is not positive.

    Returns:
        The value in $/m²·a.
    """
    if not q > 0:
        raise ZeroQ(f'The normalization constant must be positive, got {q!r}')
    if not area > 0:
        raise ZeroArea(f'The sea area must be positive, got {area!r}')
    if not depth > 0:
        raise InvalidDepth(f'The depth must be positive, got {depth!r}')

    avoided = math.fsum(p.capacity * p.treatment_cost for p in pollutants)

    per_volume = avoided / q
    column = per_volume * depth
    return column / area


def landscape_value(
    importance: Sequence[Sequence[float]],
    use: Sequence[Sequence[int]],
    unit_value: float
) -> Tuple[Tuple[float, ...], float]:
    """Value of landscape and recreation per unit area.

    Parameters:
        importance: `U[i][j]`, the importance of landscape `j` in region `i`.
        use: `I[i][j]`, 1 when landscape `j` of region `i` is used, else 0.
        unit_value: Value of one index point, $/m²·a.

    Raises:
        ShapeMismatch: The matrices differ in shape or are not matrices.
        InvalidUseMatrix: `use` holds an entry other than 0 or 1.

    Returns:
        The index of each region and the value in $/m²·a.
    """
    u = np.asarray(importance, dtype=float)
    i = np.asarray(use, dtype=float)

    if u.ndim != 2 or u.shape != i.shape or u.size == 0:
        raise ShapeMismatch(
            f'Importance {u.shape} and use {i.shape} must be matrices of one shape'
        )
    if not np.all((i == 0) | (i == 1)):
        raise InvalidUseMatrix('The use matrix must only contain 0 and 1')
    _nonnegative('unit_value', unit_value)

    index = (u * i).sum(axis=1)
    return tuple(float(v) for v in index), unit_value * float(index.mean())


def fishery_value(revenue: float, cost: float, area: float) -> float:
    """Value of fishery resources per unit area, `(revenue - cost) / area`.

    A loss-making fishery gives a negative value, which is kept and logged.

    Raises:
        ZeroArea: `area` is not positive.

    Returns:
        The value in $/m²·a.
    """
    if not area > 0:
        raise ZeroArea(f'The sea area must be positive, got {area!r}')
    _nonnegative('fishery revenue', revenue)
    _nonnegative('fishery cost', cost)

    value = (revenue - cost) / area
    if value < 0:
        _log.warning(f'The fishery runs at a loss; its value is negative ({value!r}).')
    return value


@attrs.define(frozen=True, kw_only=True)
class MarineInputs:
    """Inputs of the four marine and coastal services.

    Attributes:
        cost1: Cost of fixing CO2, $/m²·a.
        cost2: Cost of releasing CO2, $/m²·a.
        pollutants: Pollutants absorbed by the sea area.
        q: Normalization constant of pollution control.
        depth: Mean depth, m.
        sea_area: The sea area, m².
        importance: Landscape importance matrix `U`.
        use: Binary landscape use matrix `I`.
        landscape_unit_value: Value of one landscape index point, $/m²·a.
        fishery_revenue: Fishery revenue, $/a.
        fishery_cost: Fishing cost, $/a.
    """

    cost1: float
    cost2: float
    pollutants: Tuple[Pollutant, ...] = attrs.field(converter=tuple)
    q: float
    depth: float
    sea_area: float
    importance: Tuple[Tuple[float, ...], ...]
    use: Tuple[Tuple[int, ...], ...]
    landscape_unit_value: float
    fishery_revenue: float
    fishery_cost: float

    def unit_values(self) -> Dict[str, float]:
        """Compute the four marine services, in $/m²·a each."""
        return {
            'climate_regulation': climate_regulation(self.cost1, self.cost2),
            'pollution_control': pollution_control(
                self.pollutants, self.q, self.depth, self.sea_area
            ),
            'landscape': landscape_value(
                self.importance, self.use, self.landscape_unit_value
            )[1],
            'fishery': fishery_value(
                self.fishery_revenue, self.fishery_cost, self.sea_area
            ),
        }

    @classmethod
    def from_data(cls, data: Mapping[str, Any], field: str = 'marine') -> Self:
        def number(section: Mapping[str, Any], key: str, path: str) -> float:
            try:
                value = section[key]
            except KeyError:
                raise ParseError(f'{path}.{key}', 'missing field') from None
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(f'{path}.{key}', 'expected a number')
            return float(value)

        def section(key: str) -> Mapping[str, Any]:
            value = data.get(key)
            if not isinstance(value, Mapping):
                raise ParseError(f'{field}.{key}', 'missing section')
            return value

        climate = section('climate')
        pollution = section('pollution')
        landscape = section('landscape')
        fishery = section('fishery')

        pollutants = []
        for n, item in enumerate(pollution.get('pollutants', [])):
            path = f'{field}.pollution.pollutants[{n}]'
            pollutants.append(Pollutant(
                number(item, 'capacity', path), number(item, 'treatment_cost', path)
            ))

        try:
            importance = tuple(tuple(float(v) for v in row) for row in landscape['importance'])
            use = tuple(tuple(int(v) for v in row) for row in landscape['use'])
        except KeyError as exc:
            raise ParseError(f'{field}.landscape.{exc.args[0]}', 'missing field') from None
        except (TypeError, ValueError):
            raise ParseError(f'{field}.landscape', 'expected matrices of numbers') from None

        return cls(
            cost1=number(climate, 'cost1', f'{field}.climate'),
            cost2=number(climate, 'cost2', f'{field}.climate'),
            pollutants=pollutants,
            q=number(pollution, 'q', f'{field}.pollution'),
            depth=number(pollution, 'depth', f'{field}.pollution'),
            sea_area=number(data, 'sea_area', field),
            importance=importance,
            use=use,
            landscape_unit_value=number(landscape, 'unit_value', f'{field}.landscape'),
            fishery_revenue=number(fishery, 'revenue', f'{field}.fishery'),
            fishery_cost=number(fishery, 'cost', f'{field}.fishery'),
        )

    def to_data(self) -> Dict[str, Any]:
        return {
            'climate': {'cost1': self.cost1, 'cost2': self.cost2},
            'pollution': {
                'pollutants': [
                    {'capacity': p.capacity, 'treatment_cost': p.treatment_cost}
                    for p in self.pollutants
                ],
                'q': self.q,
                'depth': self.depth,
            },
            'landscape': {
                'importance': [list(row) for row in self.importance],
                'use': [list(row) for row in self.use],
                'unit_value': self.landscape_unit_value,
            },
            'fishery': {'revenue': self.fishery_revenue, 'cost': self.fishery_cost},
            'sea_area': self.sea_area,
        }
