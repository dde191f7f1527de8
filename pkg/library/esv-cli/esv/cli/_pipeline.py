import logging
from contextlib import contextmanager
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version as dist_version
from typing import Iterator, List, Optional, Tuple

from esv.appraisal import CostBenefitReport, compare_scenarios
from esv.fuzzy import FuzzyResult, MissingObservation, evaluate, normalize_weights
from esv.models import (
    EsvError, FactorTree, GradeTable, WeightVector, build_default_factor_tree,
    build_default_grade_tables
)
from esv.valuation import (
    InvalidUrbanParams, NegativeCost, ServiceValuation, total_service_value,
    urban_unit_value
)
from esv.weights import AllZeroColumn, EntropyReport, entropy_report, group_by_factor
from typing_extensions import Final

from ._errors import StageError
from ._record import RunRecord
from ._scenario import Scenario

__all__ = (
    'STAGES',
    'stage',
    'toolkit_version',
    'run_weights',
    'run_fuzzy',
    'run_valuation',
    'run_cost_benefit',
    'run_pipeline',
)


_log = logging.getLogger(__name__)

STAGES: Final = ('weights', 'fuzzy', 'valuation', 'cost_benefit')

# Scenario section each stage reads, reported when an error names no field.
_STAGE_INPUTS: Final = {
    'weights': 'matrix',
    'fuzzy': 'observations',
    'valuation': 'marine',
    'cost_benefit': 'ledger',
}


def toolkit_version() -> str:
    try:
        return dist_version('esv-cli')
    except PackageNotFoundError:
        return '0+unknown'


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Tag errors raised within the block with the stage they came from.

    Raises:
        StageError: The block raised an `EsvError` or a `ValueError`.
    """
    _log.debug(f'Entering the {name} stage.')
    try:
        yield
    except StageError:
        raise
    except (EsvError, ValueError) as exc:
        raise StageError(name, exc, _field_of(name, exc)) from exc


def _field_of(name: str, exc: Exception) -> str:
    if isinstance(exc, InvalidUrbanParams):
        return f'urban.{exc.field}'
    if isinstance(exc, MissingObservation):
        return f'observations.values.{exc.sub_factor}'
    if isinstance(exc, AllZeroColumn):
        return f'matrix[*][{exc.col}]'
    if isinstance(exc, NegativeCost):
        return f'marine.{exc.name}'

    field = getattr(exc, 'field', None)
    if isinstance(field, str):
        return field
    return _STAGE_INPUTS.get(name, name)


def run_weights(
    scenario: Scenario,
    tree: FactorTree
) -> Tuple[EntropyReport, WeightVector, List[WeightVector]]:
    """Derive the indicator, factor and sub-factor weights of a scenario."""
    with stage('weights'):
        report = entropy_report(
            scenario.matrix,
            scenario.prior,
            uniform_fallback=scenario.options.uniform_fallback
        )
        factor_weights, sub_weights = group_by_factor(report.effective, tree)

        if scenario.factor_weights is not None:
            factor_weights = normalize_weights(scenario.factor_weights)

    return report, factor_weights, sub_weights


def run_fuzzy(
    scenario: Scenario,
    tree: FactorTree,
    tables: List[GradeTable],
    factor_weights: WeightVector,
    sub_weights: List[WeightVector]
) -> FuzzyResult:
    with stage('fuzzy'):
        return evaluate(
            scenario.observations,
            tables,
            tree,
            sub_weights,
            factor_weights,
            calibration=scenario.calibration,
            mode=scenario.options.membership,
            scores=scenario.options.grade_scores,
        )


def run_valuation(scenario: Scenario, rho: float) -> ServiceValuation:
    with stage('valuation'):
        marine = scenario.marine.unit_values()
        urban = urban_unit_value(scenario.urban.with_rho(rho), scenario.formula)
        return total_service_value(marine, urban, scenario.urban.area)


def run_cost_benefit(scenario: Scenario, valuation: ServiceValuation) -> CostBenefitReport:
    with stage('cost_benefit'):
        return compare_scenarios(
            scenario.ledger,
            valuation,
            avoided_degradation=scenario.options.avoided_degradation,
            discount_rate=scenario.options.discount_rate,
        )


def run_pipeline(
    scenario: Scenario,
    *,
    tree: Optional[FactorTree] = None,
    tables: Optional[List[GradeTable]] = None
) -> RunRecord:
    """Run weights, fuzzy evaluation, valuation and cost-benefit in order.

    Parameters:
        scenario: The validated scenario.
        tree: The factor hierarchy; the default one if not given.
        tables: The grade tables; those of the scenario or the shipped ones
            if not given.

    Raises:
        StageError: A stage failed; carries the stage and the cause.

    Returns:
        The record of every intermediate result.
    """
    tree = tree or build_default_factor_tree()
    if tables is None:
        tables = list(scenario.grade_tables or build_default_grade_tables())

    report, factor_weights, sub_weights = run_weights(scenario, tree)
    fuzzy = run_fuzzy(scenario, tree, tables, factor_weights, sub_weights)
    valuation = run_valuation(scenario, fuzzy.rho)
    cost_benefit = run_cost_benefit(scenario, valuation)

    _log.info(
        f'Scenario {scenario.name!r}: {valuation.total_unit_value!r} $/m2 a, '
        f'ratio {cost_benefit.ratio_without!r} -> {cost_benefit.ratio_with!r}.'
    )
    return RunRecord(
        scenario_name=scenario.name,
        scenario_digest=scenario.digest(),
        timestamp=datetime.now(timezone.utc).isoformat(),
        version=toolkit_version(),
        entropy=report,
        factor_weights=factor_weights,
        sub_weights=sub_weights,
        fuzzy=fuzzy,
        valuation=valuation,
        cost_benefit=cost_benefit,
    )
