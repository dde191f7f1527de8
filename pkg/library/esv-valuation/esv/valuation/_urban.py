import logging
import math
from typing import Any, Callable, Dict, Mapping, Optional, TypeVar

import attrs
from esv.models import ParseError
from typing_extensions import Final, Self

from ._errors import InvalidUrbanParams, UnknownFormula, ZeroArea

__all__ = (
    'UrbanParams',
    'UrbanFormula',
    'DEFAULT_FORMULA',
    'register_urban_formula',
    'get_urban_formula',
    'urban_unit_value',
)


_log = logging.getLogger(__name__)

UrbanFormula = Callable[['UrbanParams'], float]

F = TypeVar('F', bound=UrbanFormula)

DEFAULT_FORMULA: Final[str] = 'uplift'

_FORMULAS: Dict[str, UrbanFormula] = {}


def _check_sigma(instance: 'UrbanParams', attribute: Any, value: float) -> None:
    if not 0 < value < 1:
        raise InvalidUrbanParams('sigma', f'must lie strictly between 0 and 1, got {value!r}')


def _check_nonnegative(
    instance: 'UrbanParams',
    attribute: 'attrs.Attribute[float]',
    value: float
) -> None:
    if not (math.isfinite(value) and value >= 0):
        raise InvalidUrbanParams(attribute.name, f'must be nonnegative, got {value!r}')


def _check_area(instance: 'UrbanParams', attribute: Any, value: float) -> None:
    if not value > 0:
        raise ZeroArea(f'The project land area must be positive, got {value!r}')


@attrs.define(frozen=True, kw_only=True)
class UrbanParams:
    """Parameters of the urban unit value.

    Attributes:
        sigma: Viscosity coefficient damping the value, strictly within (0, 1).
        p0: Comprehensive productivity of urban land, $/m²·a.
        environmental_cost: Environmental protection cost in the planning, $.
        area: Land area of the project, m².
        rho: Value of the evaluated grade, $/m²·a. Filled in from the fuzzy
            evaluation with `with_rho()`.
        p0_reference: Reference productivity dividing the uplift, $/m²·a.
            Defaults to `p0`.
    """

    sigma: float = attrs.field(converter=float, validator=_check_sigma)
    p0: float = attrs.field(converter=float, validator=_check_nonnegative)
    environmental_cost: float = attrs.field(converter=float, validator=_check_nonnegative)
    area: float = attrs.field(converter=float, validator=_check_area)
    rho: float = attrs.field(default=0.0, converter=float, validator=_check_nonnegative)
    p0_reference: Optional[float] = None

    def with_rho(self, rho: float) -> Self:
        return attrs.evolve(self, rho=rho)

    @classmethod
    def from_data(cls, data: Mapping[str, Any], field: str = 'urban') -> Self:
        values: Dict[str, Any] = {}
        for key in ('sigma', 'p0', 'environmental_cost', 'area'):
            if key not in data:
                raise ParseError(f'{field}.{key}', 'missing field')
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(f'{field}.{key}', 'expected a number')
            values[key] = value

        reference = data.get('p0_reference')
        if reference is not None and (
            isinstance(reference, bool) or not isinstance(reference, (int, float))
        ):
            raise ParseError(f'{field}.p0_reference', 'expected a number')

        return cls(
            **values,
            rho=data.get('rho', 0.0),
            p0_reference=float(reference) if reference is not None else None
        )

    def to_data(self) -> Dict[str, Any]:
        return attrs.asdict(self)


def register_urban_formula(name: str) -> Callable[[F], F]:
    """Register a reconstruction of the urban unit value under a name.

    Examples:

        ```python
        @register_urban_formula('flat')
        def flat(params: UrbanParams) -> float:
            return params.rho
        ```

    Parameters:
        name: The name scenarios select the formula by.

    Raises:
        ValueError: A formula is already registered under the name.
    """
    def decorator(func: F) -> F:
        if name in _FORMULAS:
            raise ValueError(f'An urban formula is already registered as {name!r}')

        _FORMULAS[name] = func
        return func

    return decorator


def get_urban_formula(name: str) -> UrbanFormula:
    """Look up a registered urban formula.

    Raises:
        UnknownFormula: Nothing is registered under the name.
    """
    try:
        return _FORMULAS[name]
    except KeyError:
        raise UnknownFormula(name) from None


@register_urban_formula('uplift')
def _uplift(params: UrbanParams) -> float:
    # sigma * rho * (P0 + E / S) / P0_ref
    reference = params.p0 if params.p0_reference is None else params.p0_reference
    if not reference > 0:
        raise InvalidUrbanParams(
            'p0_reference', f'must be positive for the uplift formula, got {reference!r}'
        )

    uplift = (params.p0 + params.environmental_cost / params.area) / reference
    return params.sigma * params.rho * uplift


@register_urban_formula('damped')
def _damped(params: UrbanParams) -> float:
    return params.sigma * params.rho


def urban_unit_value(params: UrbanParams, formula: str = DEFAULT_FORMULA) -> float:
    """Value of the urban ecosystem services per unit area.

    Parameters:
        params: The urban parameters, with `rho` filled in.
        formula: Name of the registered formula to use.

    Raises:
        UnknownFormula: No formula is registered under `formula`.

    Returns:
        The value in $/m²·a.
    """
    value = get_urban_formula(formula)(params)

    _log.debug(f'Urban unit value with the {formula!r} formula: {value!r}.')
    return value
