import sys
from functools import singledispatch
from typing import Any, Dict, List, Optional, TextIO, Tuple

import attrs
from esv.appraisal import CostBenefitReport
from esv.forecast import TrainConfig
from esv.fuzzy import FuzzyResult
from esv.models import FactorTree, Grade, build_default_factor_tree, dump_json
from esv.valuation import ServiceValuation
from esv.weights import EntropyReport
from typing_extensions import Final, Literal

from ._record import RunRecord

__all__ = (
    'FORMATS',
    'ReportFormat',
    'ForecastReport',
    'format_number',
    'render',
    'emit_report',
)


FORMATS: Final = ('text', 'structured')

ReportFormat = Literal['text', 'structured']


@attrs.define(frozen=True, kw_only=True)
class ForecastReport:
    """Forecast rows of a series with the training that produced them.

    Attributes:
        quantity: The column of the series that was forecast.
        config: The hyperparameters of training.
        initial_loss: Training loss before the first epoch.
        final_loss: Training loss after the last epoch.
        points: The forecast `(year, value)` pairs.
    """

    quantity: str
    config: TrainConfig
    initial_loss: float
    final_loss: float
    points: Tuple[Tuple[int, float], ...] = attrs.field(converter=tuple)

    def to_data(self) -> Dict[str, Any]:
        return {
            'quantity': self.quantity,
            'config': self.config.to_data(),
            'initial_loss': self.initial_loss,
            'final_loss': self.final_loss,
            'points': [{'year': year, 'value': value} for year, value in self.points],
        }


def format_number(value: Optional[float]) -> str:
    """Format a number with enough digits to read it back exactly."""
    if value is None:
        return '-'
    return f'{value:.17g}'


def _row(label: str, value: Optional[float], width: int = 28) -> str:
    return f'  {label:<{width}} {format_number(value)}'


@singledispatch
def _text(obj: Any, tree: FactorTree) -> List[str]:
    raise TypeError(f'Cannot render {type(obj).__name__!r} as text')


@_text.register
def _(obj: EntropyReport, tree: FactorTree) -> List[str]:
    lines = ['Indicator weights']
    names = [sub.name for sub in tree.leaves()]
    if len(names) != len(obj.weights):
        names = [f'indicator {k + 1}' for k in range(len(obj.weights))]

    width = max(len(name) for name in names)
    lines.append(f'  {"indicator":<{width}} {"entropy":>22} {"weight":>22} {"combined":>22}')
    for k, name in enumerate(names):
        combined = obj.combined[k] if obj.combined is not None else None
        lines.append(
            f'  {name:<{width}} {format_number(obj.entropies[k]):>22} '
            f'{format_number(obj.weights[k]):>22} {format_number(combined):>22}'
        )
    return lines


@_text.register
def _(obj: FuzzyResult, tree: FactorTree) -> List[str]:
    lines = ['Fuzzy evaluation']
    for grade in Grade:
        lines.append(_row(f'membership {grade.label}', obj.theta_vector[grade]))
    lines.append(_row('defuzzified grade', obj.theta_scalar))
    lines.append(f'  {"evaluated grade":<28} {obj.grade_label}')
    lines.append(_row('value of the grade ($/m2 a)', obj.rho))
    return lines


@_text.register
def _(obj: ServiceValuation, tree: FactorTree) -> List[str]:
    lines = ['Service values ($/m2 a)']
    for name, value in obj.components.items():
        lines.append(_row(name.replace('_', ' '), value))
    lines.append(_row('total', obj.total_unit_value))
    lines.append(_row('area (m2)', obj.area))
    lines.append(_row('annual value ($/a)', obj.total_annual_value))
    return lines


@_text.register
def _(obj: CostBenefitReport, tree: FactorTree) -> List[str]:
    return [
        f'Benefit-cost comparison ({obj.direction})',
        _row('total costs ($)', obj.total_costs),
        _row('total benefits ($)', obj.total_benefits),
        _row('environmental cost ($)', obj.environmental_cost),
        _row('avoided degradation ($)', obj.avoided_degradation),
        _row('discount rate', obj.discount_rate),
        _row('ratio without env. cost', obj.ratio_without),
        _row('ratio with env. cost', obj.ratio_with),
        _row('change', obj.delta),
    ]


@_text.register
def _(obj: ForecastReport, tree: FactorTree) -> List[str]:
    lines = [
        f'Forecast of {obj.quantity}',
        _row('initial training loss', obj.initial_loss),
        _row('final training loss', obj.final_loss),
    ]
    lines.extend(f'  {year:<28} {format_number(value)}' for year, value in obj.points)
    return lines


@_text.register
def _(obj: RunRecord, tree: FactorTree) -> List[str]:
    lines = [
        f'Scenario {obj.scenario_name} ({obj.scenario_digest[:12]})',
        f'  run at {obj.timestamp} with esv {obj.version}',
        '',
    ]
    lines.extend(_text(obj.entropy, tree))
    lines.append('')
    lines.append('Factor weights')
    for factor, weight in zip(tree, obj.factor_weights):
        lines.append(_row(factor.name, weight, width=40))
    lines.append('')
    for part in (obj.fuzzy, obj.valuation, obj.cost_benefit):
        lines.extend(_text(part, tree))
        lines.append('')
    return lines[:-1]


def render(obj: Any, fmt: ReportFormat = 'text', *, tree: Optional[FactorTree] = None) -> str:
    """Render a result of the toolkit in a report format.

    The structured format is the JSON document of `to_data()`, which keeps
    every number exactly. The text format prints numbers with 17
    significant digits.

    Parameters:
        obj: A `RunRecord` or one of the results it is made of.
        fmt: Either `'text'` or `'structured'`.
        tree: The factor hierarchy naming the indicators; the default one
            if not given.

    Raises:
        ValueError: The format is unknown.
        TypeError: The object cannot be rendered.
    """
    if fmt == 'structured':
        return dump_json(obj.to_data(), pretty=True) + '\n'
    if fmt == 'text':
        return '\n'.join(_text(obj, tree or build_default_factor_tree())) + '\n'

    raise ValueError(f'Unknown report format {fmt!r}, expected one of {FORMATS}')


def emit_report(
    record: Any,
    fmt: ReportFormat = 'text',
    stream: Optional[TextIO] = None,
    *,
    tree: Optional[FactorTree] = None
) -> None:
    """Write a report to a stream, standard output by default."""
    (stream or sys.stdout).write(render(record, fmt, tree=tree))
