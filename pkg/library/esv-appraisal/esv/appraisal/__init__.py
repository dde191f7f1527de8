from ._errors import (
    InvalidAppraisal,
    InvalidLedger,
    ZeroCost,
)
from ._ledger import (
    ProjectLedger,
)
from ._ratio import (
    RATIO_DIRECTION,
    CostBenefitReport,
    benefit_cost_ratio,
    compare_scenarios,
    environmental_cost,
    ratio_delta,
)

__all__ = (
    'InvalidAppraisal',
    'InvalidLedger',
    'ZeroCost',
    'ProjectLedger',
    'RATIO_DIRECTION',
    'CostBenefitReport',
    'benefit_cost_ratio',
    'compare_scenarios',
    'environmental_cost',
    'ratio_delta',
)
