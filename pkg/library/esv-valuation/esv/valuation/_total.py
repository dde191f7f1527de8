import logging
import math
from types import MappingProxyType
from typing import Any, Dict, Mapping, Sequence, Union

import attrs
from typing_extensions import Final, Self

from ._errors import ZeroArea

__all__ = (
    'MARINE_SERVICES',
    'ServiceValuation',
    'total_service_value',
)


_log = logging.getLogger(__name__)

MARINE_SERVICES: Final = ('climate_regulation', 'pollution_control', 'landscape', 'fishery')


def _freeze(components: Mapping[str, Any]) -> 'MappingProxyType[str, float]':
    return MappingProxyType({str(k): float(v) for k, v in components.items()})


@attrs.define(frozen=True, kw_only=True)
class ServiceValuation:
    """Value of the ecosystem services of the project land.

    Attributes:
        components: Value of each service, $/m²·a, in insertion order.
        area: The land area valued, m².
    """

    components: Mapping[str, float] = attrs.field(converter=_freeze)
    area: float = attrs.field(converter=float)

    @property
    def total_unit_value(self) -> float:
        """Sum of the components, $/m²·a."""
        return math.fsum(self.components.values())

    @property
    def total_annual_value(self) -> float:
        """Value of the whole area in one year, $/a."""
        return self.total_unit_value * self.area

    def to_data(self) -> Dict[str, Any]:
        return {
            'components': dict(self.components),
            'area': self.area,
            'total_unit_value': self.total_unit_value,
            'total_annual_value': self.total_annual_value,
        }

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        return cls(components=data['components'], area=data['area'])


def total_service_value(
    marine: Union[Mapping[str, float], Sequence[float]],
    urban: float,
    area: float
) -> ServiceValuation:
    """Combine the marine services with the urban unit value.

    Parameters:
        marine: The four marine unit values keyed by service, as returned by
            `MarineInputs.unit_values()`, or listed in `MARINE_SERVICES` order.
        urban: The urban unit value, $/m²·a.
        area: The project land area, m².

    Raises:
        ZeroArea: `area` is not positive.

    Returns:
        The valuation with one component per service.
    """
    if not area > 0:
        raise ZeroArea(f'The project land area must be positive, got {area!r}')

    if not isinstance(marine, Mapping):
        if len(marine) != len(MARINE_SERVICES):
            raise ValueError(
                f'Expected {len(MARINE_SERVICES)} marine unit values, got {len(marine)}'
            )
        marine = dict(zip(MARINE_SERVICES, marine))

    components = {name: float(marine[name]) for name in MARINE_SERVICES}
    components['urban'] = urban

    for name, value in components.items():
        if value < 0:
            _log.warning(f'The {name} service has a negative value ({value!r}).')

    return ServiceValuation(components=components, area=area)
