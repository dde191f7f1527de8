import logging
import math
from typing import Any, Dict, Mapping, Optional

import attrs
from esv.valuation import ServiceValuation
from typing_extensions import Final, Literal, Self

from ._errors import InvalidAppraisal, ZeroCost
from ._ledger import ProjectLedger

__all__ = (
    'RATIO_DIRECTION',
    'CostBenefitReport',
    'environmental_cost',
    'benefit_cost_ratio',
    'ratio_delta',
    'compare_scenarios',
)


_log = logging.getLogger(__name__)

RATIO_DIRECTION: Final[Literal['benefits/costs']] = 'benefits/costs'


def environmental_cost(
    valuation: ServiceValuation,
    area: float,
    horizon_years: int,
    *,
    discount_rate: float = 0.0
) -> float:
    """Monetized ecosystem services the project land gives up.

    Without discounting this is `total_unit_value * area * horizon_years`.
    With a positive `discount_rate` the annual cost of year `t` is divided by
    `(1 + discount_rate) ** t`, counting years from one.

    Parameters:
        valuation: The value of the services of the land.
        area: The project land area, m².
        horizon_years: Years the land is given up for.
        discount_rate: Annual discount rate, zero by default.

    Raises:
        InvalidAppraisal: An argument is outside its domain.

    Returns:
        The environmental cost in $.
    """
    if not area > 0:
        raise InvalidAppraisal('area', f'the project land area must be positive, got {area!r}')
    if horizon_years < 1:
        raise InvalidAppraisal(
            'horizon_years', f'the horizon must be at least one year, got {horizon_years!r}'
        )
    if not (math.isfinite(discount_rate) and discount_rate >= 0):
        raise InvalidAppraisal(
            'discount_rate', f'the discount rate must be nonnegative, got {discount_rate!r}'
        )

    annual = valuation.total_unit_value * area
    if discount_rate == 0:
        return annual * horizon_years

    return math.fsum(
        annual / (1 + discount_rate) ** year for year in range(1, horizon_years + 1)
    )


def benefit_cost_ratio(
    ledger: ProjectLedger,
    env_cost: Optional[float] = None,
    *,
    avoided_degradation: float = 0.0
) -> float:
    """Benefits of the project divided by its costs.

    Parameters:
        ledger: The project ledger.
        env_cost: Environmental cost added to the costs, if any.
        avoided_degradation: Benefit credited for environmental degradation
            the project avoids, zero unless configured.

    Raises:
        InvalidAppraisal: A cost or credit is negative.
        ZeroCost: The costs add up to zero.

    Returns:
        The ratio of benefits to costs.
    """
    if env_cost is not None and not env_cost >= 0:
        raise InvalidAppraisal(
            'env_cost', f'the environmental cost must be nonnegative, got {env_cost!r}'
        )
    if not avoided_degradation >= 0:
        raise InvalidAppraisal(
            'avoided_degradation',
            f'the credit must be nonnegative, got {avoided_degradation!r}'
        )

    costs = ledger.total_costs + (env_cost or 0.0)
    if not costs > 0:
        raise ZeroCost('The project has no costs to divide its benefits by')

    return (ledger.total_benefits + avoided_degradation) / costs


def ratio_delta(ledger: ProjectLedger, first: float, second: float) -> float:
    """Change of the ratio between two environmental costs, `second` minus `first`.

    Swapping the two costs negates the result.
    """
    return benefit_cost_ratio(ledger, second) - benefit_cost_ratio(ledger, first)


@attrs.define(frozen=True, kw_only=True)
class CostBenefitReport:
    """Benefit-cost ratios before and after adding the environmental cost.

    Attributes:
        ratio_without: The ratio of the ledger alone.
        ratio_with: The ratio with the environmental cost, and the avoided
            degradation credit when one was configured.
        environmental_cost: The environmental cost added, $.
        avoided_degradation: The benefit credited, $, or None when off.
        total_costs: Costs of the ledger, $.
        total_benefits: Benefits of the ledger, $.
        discount_rate: The discount rate of the environmental cost.
        direction: How the ratios are formed.
    """

    ratio_without: float
    ratio_with: float
    environmental_cost: float
    avoided_degradation: Optional[float] = None
    total_costs: float
    total_benefits: float
    discount_rate: float = 0.0
    direction: str = RATIO_DIRECTION

    @property
    def delta(self) -> float:
        """`ratio_with - ratio_without`."""
        return self.ratio_with - self.ratio_without

    def to_data(self) -> Dict[str, Any]:
        data = attrs.asdict(self)
        data['delta'] = self.delta
        return data

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        fields = {a.name for a in attrs.fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in fields})


def compare_scenarios(
    ledger: ProjectLedger,
    valuation: ServiceValuation,
    *,
    avoided_degradation: Optional[float] = None,
    discount_rate: float = 0.0
) -> CostBenefitReport:
    """Compare the benefit-cost ratio before and after the environmental cost.

    The environmental cost is the value of the services of the ledger's area
    over its horizon. Benefits only change when `avoided_degradation` is
    given.

    Parameters:
        ledger: The project ledger.
        valuation: The value of the services of the project land.
        avoided_degradation: Benefit to credit alongside the environmental cost.
        discount_rate: Annual discount rate of the environmental cost.

    Raises:
        ZeroCost: The ledger has no costs.
    """
    env = environmental_cost(
        valuation, ledger.area, ledger.horizon_years, discount_rate=discount_rate
    )

    without = benefit_cost_ratio(ledger)
    with_env = benefit_cost_ratio(
        ledger, env, avoided_degradation=avoided_degradation or 0.0
    )

    if ledger.total_benefits == 0:
        _log.warning('The ledger lists no benefits.')

    return CostBenefitReport(
        ratio_without=without,
        ratio_with=with_env,
        environmental_cost=env,
        avoided_degradation=avoided_degradation,
        total_costs=ledger.total_costs,
        total_benefits=ledger.total_benefits,
        discount_rate=discount_rate,
    )
