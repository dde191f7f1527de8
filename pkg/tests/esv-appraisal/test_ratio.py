import logging

import numpy as np
import pytest
from esv.appraisal import (
    RATIO_DIRECTION, CostBenefitReport, InvalidAppraisal, ProjectLedger, ZeroCost,
    benefit_cost_ratio, compare_scenarios, environmental_cost, ratio_delta
)
from esv.models import ComputationError, InputError
from esv.valuation import ServiceValuation, total_service_value


def _ledger(benefits: float = 100, costs: float = 200, area: float = 1, years: int = 1):
    return ProjectLedger(
        tangible_costs={'materials': costs},
        intangible_costs={},
        benefits={'direct': benefits} if benefits else {},
        area=area,
        horizon_years=years,
    )


def _valuation(unit_value: float) -> ServiceValuation:
    return ServiceValuation(components={'urban': unit_value}, area=1)


class TestEnvironmentalCost:
    def test_city_l_unit_value(self) -> None:
        valuation = total_service_value([0.02, 0.60, 0.11, 0.32], 0.56, 1e6)
        assert environmental_cost(valuation, 1e6, 1) == pytest.approx(1.61e6)

    def test_zero(self) -> None:
        assert environmental_cost(_valuation(0), 10, 5) == 0

    def test_years(self) -> None:
        assert environmental_cost(_valuation(1.0), 1.0, 10) == 10

    def test_discounted(self) -> None:
        cost = environmental_cost(_valuation(1.0), 1.0, 2, discount_rate=0.1)
        assert cost == pytest.approx(1 / 1.1 + 1 / 1.21)

    @pytest.mark.parametrize('area,years,rate,field', [
        (0, 1, 0, 'area'),
        (1, 0, 0, 'horizon_years'),
        (1, 1, -0.1, 'discount_rate'),
    ])
    def test_invalid(self, area: float, years: int, rate: float, field: str) -> None:
        with pytest.raises(InvalidAppraisal) as info:
            environmental_cost(_valuation(1.0), area, years, discount_rate=rate)

        assert info.value.field == field
        assert isinstance(info.value, InputError)


class TestRatio:
    def test_plain(self) -> None:
        assert benefit_cost_ratio(_ledger()) == 0.5

    def test_environmental_cost(self) -> None:
        assert benefit_cost_ratio(_ledger(), 50) == 0.4

    def test_zero_cost(self) -> None:
        with pytest.raises(ZeroCost) as info:
            benefit_cost_ratio(_ledger(costs=0))
        assert isinstance(info.value, ComputationError)

    def test_strictly_decreasing(self) -> None:
        ledger = _ledger()
        ratios = [benefit_cost_ratio(ledger, env) for env in np.linspace(0, 1000, 50)]

        assert all(later < earlier for earlier, later in zip(ratios, ratios[1:]))

    def test_negative_environmental_cost(self) -> None:
        with pytest.raises(InvalidAppraisal) as info:
            benefit_cost_ratio(_ledger(), -1)
        assert info.value.field == 'env_cost'

    def test_negative_credit(self) -> None:
        with pytest.raises(InvalidAppraisal) as info:
            benefit_cost_ratio(_ledger(), avoided_degradation=-1)
        assert info.value.field == 'avoided_degradation'

    def test_delta_antisymmetric(self) -> None:
        ledger = _ledger()
        assert ratio_delta(ledger, 10, 70) == pytest.approx(-ratio_delta(ledger, 70, 10))
        assert ratio_delta(ledger, 0, 50) == pytest.approx(-0.1)


class TestCompareScenarios:
    def test_environmental_cost_lowers_ratio(self) -> None:
        report = compare_scenarios(_ledger(), _valuation(50))

        assert report.ratio_without == 0.5
        assert report.ratio_with == 0.4
        assert report.environmental_cost == 50
        assert report.ratio_with < report.ratio_without
        assert report.delta == pytest.approx(-0.1)
        assert report.direction == RATIO_DIRECTION

    def test_no_environmental_cost(self) -> None:
        report = compare_scenarios(_ledger(), _valuation(0))
        assert report.ratio_with == report.ratio_without

    def test_avoided_degradation(self) -> None:
        report = compare_scenarios(_ledger(), _valuation(50), avoided_degradation=20)

        assert report.ratio_without == 0.5
        assert report.ratio_with == pytest.approx(0.48)
        assert report.avoided_degradation == 20

    def test_no_benefits(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.WARNING):
            report = compare_scenarios(_ledger(benefits=0), _valuation(50))

        assert report.ratio_without == 0
        assert report.ratio_with == 0
        assert 'no benefits' in caplog.text

    def test_discount_rate(self) -> None:
        plain = compare_scenarios(_ledger(years=5), _valuation(10))
        discounted = compare_scenarios(_ledger(years=5), _valuation(10), discount_rate=0.05)

        assert discounted.environmental_cost < plain.environmental_cost
        assert discounted.ratio_with > plain.ratio_with

    def test_round_trip(self) -> None:
        report = compare_scenarios(_ledger(), _valuation(50), avoided_degradation=20)
        data = report.to_data()

        assert data['delta'] == report.delta
        assert CostBenefitReport.from_data(data) == report
