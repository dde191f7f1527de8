import math
from types import MappingProxyType
from typing import Any, Dict, Mapping

import attrs
from esv.models import ParseError
from typing_extensions import Self

from ._errors import InvalidLedger

__all__ = (
    'ProjectLedger',
)


def _freeze(items: Mapping[str, Any]) -> 'MappingProxyType[str, float]':
    return MappingProxyType({str(label): float(amount) for label, amount in items.items()})


def _check_items(instance: 'ProjectLedger', attribute: Any, value: Mapping[str, float]) -> None:
    for label, amount in value.items():
        if not (math.isfinite(amount) and amount >= 0):
            raise InvalidLedger(
                f'{attribute.name}.{label}', f'must be nonnegative, got {amount!r}'
            )


@attrs.define(frozen=True, kw_only=True)
class ProjectLedger:
    """Costs and benefits of a project, in $.

    Attributes:
        tangible_costs: Costs with a market price, such as materials,
            operations, real estate, wages and utilities.
        intangible_costs: Costs without one, such as time, external energy
            and the assessed loss of business.
        benefits: Direct, indirect and choice value of the project.
        area: Land area of the project, m².
        horizon_years: Years the project is appraised over.
    """

    tangible_costs: Mapping[str, float] = attrs.field(converter=_freeze, validator=_check_items)
    intangible_costs: Mapping[str, float] = attrs.field(
        converter=_freeze, validator=_check_items
    )
    benefits: Mapping[str, float] = attrs.field(converter=_freeze, validator=_check_items)
    area: float = attrs.field(converter=float)
    horizon_years: int

    def __attrs_post_init__(self) -> None:
        if not self.area > 0:
            raise InvalidLedger('area', f'must be positive, got {self.area!r}')
        if isinstance(self.horizon_years, bool) or not isinstance(self.horizon_years, int) \
                or self.horizon_years < 1:
            raise InvalidLedger(
                'horizon_years', f'must be a positive integer, got {self.horizon_years!r}'
            )

    @property
    def total_costs(self) -> float:
        """Tangible and intangible costs together."""
        return math.fsum([*self.tangible_costs.values(), *self.intangible_costs.values()])

    @property
    def total_benefits(self) -> float:
        return math.fsum(self.benefits.values())

    @classmethod
    def from_data(cls, data: Mapping[str, Any], field: str = 'ledger') -> Self:
        sections: Dict[str, Mapping[str, Any]] = {}
        for key in ('tangible_costs', 'intangible_costs', 'benefits'):
            items = data.get(key, {})
            if not isinstance(items, Mapping):
                raise ParseError(f'{field}.{key}', 'expected a mapping of label to amount')
            for label, amount in items.items():
                if isinstance(amount, bool) or not isinstance(amount, (int, float)):
                    raise ParseError(f'{field}.{key}.{label}', 'expected a number')
            sections[key] = items

        for key in ('area', 'horizon_years'):
            if key not in data:
                raise ParseError(f'{field}.{key}', 'missing field')

        if isinstance(data['area'], bool) or not isinstance(data['area'], (int, float)):
            raise ParseError(f'{field}.area', 'expected a number')

        if isinstance(data['horizon_years'], bool) or not isinstance(data['horizon_years'], int):
            raise ParseError(f'{field}.horizon_years', 'expected an integer')

        return cls(**sections, area=data['area'], horizon_years=data['horizon_years'])

    def to_data(self) -> Dict[str, Any]:
        return {
            'tangible_costs': dict(self.tangible_costs),
            'intangible_costs': dict(self.intangible_costs),
            'benefits': dict(self.benefits),
            'area': self.area,
            'horizon_years': self.horizon_years,
        }
