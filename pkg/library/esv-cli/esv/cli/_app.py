import logging
import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import anyio
import anyio.to_thread
import attrs
import click
from esv.forecast import TrainConfig, fit, read_series
from esv.fuzzy import Calibration, ObservationSet, evaluate, normalize_weights
from esv.models import (
    EsvError, FactorTree, GradeTable, ParseError, WeightVector,
    build_default_factor_tree, build_default_grade_tables, dump_json, read_json_file
)
from esv.valuation import ServiceValuation
from esv.weights import entropy_report
from typing_extensions import Final

from ._errors import exit_code
from ._pipeline import (
    run_cost_benefit, run_fuzzy, run_pipeline, run_valuation, run_weights,
    stage
)
from ._record import RunRecord
from ._report import FORMATS, ForecastReport, render
from ._scenario import (
    DATA_DIR_ENV, SHIPPED_DATA, Scenario, data_dir, load_scenario, read_grade_tables,
    read_matrix
)

__all__ = (
    'cli',
    'main',
    'run_scenarios',
)


_log = logging.getLogger(__name__)

DEFAULT_SCENARIO: Final[str] = 'city_l'
DEFAULT_SERIES: Final[str] = 'city_l_series.csv'

# Subdirectory of $ESV_DATA_DIR that `run` persists records to.
RUNS_DIR: Final[str] = 'runs'

_LOG_LEVELS: Final = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


@contextmanager
def _reporting_errors() -> Iterator[None]:
    try:
        yield
    except (EsvError, ValueError) as exc:
        click.echo(f'Error: {exc}', err=True)
        raise click.exceptions.Exit(exit_code(exc)) from exc


def _emit(obj: Any, fmt: str, out: Optional[str]) -> None:
    text = render(obj, fmt)  # type: ignore[arg-type]
    if out is None:
        click.echo(text, nl=False)
        return

    try:
        Path(out).write_text(text, encoding='utf-8')
    except OSError as exc:
        raise ParseError(out, f'cannot write file: {exc.strerror}') from exc
    _log.info(f'Wrote the report to {out!r}.')


def _format_option() -> Any:
    return click.option(
        '--format', 'fmt', type=click.Choice(FORMATS), default='text', show_default=True,
        help='Report format; structured reports are JSON and keep every digit.'
    )


def _scenario_option() -> Any:
    return click.option(
        '--scenario', default=DEFAULT_SCENARIO, show_default=True,
        help=f'Scenario file, or the name of one in ${DATA_DIR_ENV}.'
    )


def _out_option() -> Any:
    return click.option(
        '--out', type=click.Path(dir_okay=False), default=None,
        help='Write the report to this file instead of standard output.'
    )


def _grade_tables_option() -> Any:
    return click.option(
        '--grade-tables', type=click.Path(exists=True, dir_okay=False), default=None,
        help='Grade table data file to grade against instead of the scenario tables.'
    )


def _grade_tables(
    path: Optional[str],
    scenario: Optional[Scenario],
    tree: FactorTree
) -> List[GradeTable]:
    if path is not None:
        return list(read_grade_tables(path, tree))
    if scenario is not None and scenario.grade_tables is not None:
        return list(scenario.grade_tables)
    return build_default_grade_tables()


@click.group()
@click.option(
    '--log-level', type=click.Choice(_LOG_LEVELS, case_sensitive=False),
    default='WARNING', show_default=True, help='Level of the log written to stderr.'
)
@click.option('--seed', type=int, default=None, help='Seed of every randomized step.')
@click.version_option(package_name='esv-cli')
@click.pass_context
def cli(ctx: click.Context, log_level: str, seed: Optional[int]) -> None:
    """Value urban and marine ecosystem services and appraise projects."""
    logging.basicConfig(
        level=log_level.upper(), format='%(levelname)s %(name)s: %(message)s'
    )
    ctx.obj = {'seed': seed}


@cli.command()
@_scenario_option()
@click.option(
    '--matrix', type=click.Path(exists=True, dir_okay=False), default=None,
    help='Comma-separated evaluation matrix to weight instead of the scenario matrix.'
)
@click.option(
    '--uniform-fallback', is_flag=True, default=False,
    help='Use uniform weights when no indicator discriminates between the rows.'
)
@_format_option()
@_out_option()
def weights(
    scenario: str,
    matrix: Optional[str],
    uniform_fallback: bool,
    fmt: str,
    out: Optional[str]
) -> None:
    """Derive entropy weights of the indicators."""
    with _reporting_errors():
        tree = build_default_factor_tree()
        if matrix is not None:
            with stage('weights'):
                report = entropy_report(read_matrix(matrix), uniform_fallback=uniform_fallback)
        else:
            loaded = load_scenario(scenario, tree=tree)
            if uniform_fallback:
                loaded = attrs.evolve(
                    loaded, options=attrs.evolve(loaded.options, uniform_fallback=True)
                )
            report, _, _ = run_weights(loaded, tree)

        _emit(report, fmt, out)


def _read_observations(path: str) -> ObservationSet:
    data = read_json_file(path, path)
    if not isinstance(data, dict):
        raise ParseError(path, 'expected an object with the observed values')
    return ObservationSet.from_data(data)


def _read_factor_weights(path: str) -> Tuple[float, ...]:
    data = read_json_file(path, path)
    if not isinstance(data, list) or not all(
        isinstance(value, (int, float)) and not isinstance(value, bool) for value in data
    ):
        raise ParseError(path, 'expected a list of factor weights')
    return tuple(float(value) for value in data)


@cli.command(name='evaluate')
@click.option(
    '--scenario', default=None,
    help='Scenario to take the weights, calibration and options from.'
)
@click.option(
    '--observations', type=click.Path(exists=True, dir_okay=False), default=None,
    help='JSON file with the observed sub-factor values.'
)
@click.option(
    '--weights', 'weights_file', type=click.Path(exists=True, dir_okay=False), default=None,
    help='JSON list of the five factor weights, renormalized if needed.'
)
@click.option(
    '--top-value', type=float, default=1.0, show_default=True,
    help='Value of the best grade without a scenario, $/m2 a.'
)
@_grade_tables_option()
@_format_option()
@_out_option()
def evaluate_command(
    scenario: Optional[str],
    observations: Optional[str],
    weights_file: Optional[str],
    top_value: float,
    grade_tables: Optional[str],
    fmt: str,
    out: Optional[str]
) -> None:
    """Evaluate the grade of a city from its observations.

    Without a scenario every factor and sub-factor is weighted equally
    unless --weights is given.
    """
    with _reporting_errors():
        tree = build_default_factor_tree()

        if scenario is None and observations is None:
            raise ParseError('--observations', 'give a scenario or an observations file')

        factor_override = _read_factor_weights(weights_file) if weights_file else None

        if scenario is not None:
            loaded = load_scenario(scenario, tree=tree)
            if observations is not None:
                loaded = attrs.evolve(loaded, observations=_read_observations(observations))
            if factor_override is not None:
                loaded = attrs.evolve(loaded, factor_weights=factor_override)

            loaded.observations.check(tree)
            _, factor_weights, sub_weights = run_weights(loaded, tree)
            tables = _grade_tables(grade_tables, loaded, tree)
            result = run_fuzzy(loaded, tree, tables, factor_weights, sub_weights)
        else:
            assert observations is not None
            observed = _read_observations(observations)
            observed.check(tree)
            tables = _grade_tables(grade_tables, None, tree)

            with stage('fuzzy'):
                result = evaluate(
                    observed,
                    tables,
                    tree,
                    [WeightVector.uniform(len(factor.sub_factors)) for factor in tree],
                    (
                        normalize_weights(factor_override) if factor_override is not None
                        else WeightVector.uniform(len(tree.factors))
                    ),
                    calibration=Calibration.linear(top_value),
                )

        _emit(result, fmt, out)


@cli.command()
@_scenario_option()
@click.option(
    '--rho', type=float, default=None,
    help='Value of the grade, $/m2 a, instead of evaluating it.'
)
@_grade_tables_option()
@_format_option()
@_out_option()
def value(
    scenario: str,
    rho: Optional[float],
    grade_tables: Optional[str],
    fmt: str,
    out: Optional[str]
) -> None:
    """Value the ecosystem services of a scenario."""
    with _reporting_errors():
        tree = build_default_factor_tree()
        loaded = load_scenario(scenario, tree=tree)

        if rho is None:
            tables = _grade_tables(grade_tables, loaded, tree)
            _, factor_weights, sub_weights = run_weights(loaded, tree)
            rho = run_fuzzy(loaded, tree, tables, factor_weights, sub_weights).rho

        _emit(run_valuation(loaded, rho), fmt, out)


def _read_valuation(path: str) -> ServiceValuation:
    data = read_json_file(path, path)
    if not isinstance(data, dict):
        raise ParseError(path, 'expected a valuation or a run record')
    if 'record_version' in data:
        data = data.get('valuation')

    try:
        return ServiceValuation.from_data(data)
    except (KeyError, TypeError):
        raise ParseError(path, 'expected a valuation or a run record') from None


@cli.command()
@_scenario_option()
@click.option(
    '--valuation', 'valuation_file', type=click.Path(exists=True, dir_okay=False),
    default=None, help='Structured valuation or run record to charge the project with.'
)
@click.option(
    '--discount-rate', type=float, default=None,
    help='Annual discount rate of the environmental cost, overriding the scenario.'
)
@_grade_tables_option()
@_format_option()
@_out_option()
def cbr(
    scenario: str,
    valuation_file: Optional[str],
    discount_rate: Optional[float],
    grade_tables: Optional[str],
    fmt: str,
    out: Optional[str]
) -> None:
    """Compare the benefit-cost ratio with and without the environmental cost."""
    with _reporting_errors():
        tree = build_default_factor_tree()
        loaded = load_scenario(scenario, tree=tree)
        if discount_rate is not None:
            loaded = attrs.evolve(
                loaded, options=attrs.evolve(loaded.options, discount_rate=discount_rate)
            )

        if valuation_file is not None:
            valuation = _read_valuation(valuation_file)
        else:
            tables = _grade_tables(grade_tables, loaded, tree)
            valuation = run_pipeline(loaded, tree=tree, tables=tables).valuation

        _emit(run_cost_benefit(loaded, valuation), fmt, out)


def _default_series() -> Path:
    configured = data_dir() / DEFAULT_SERIES
    return configured if configured.is_file() else SHIPPED_DATA / DEFAULT_SERIES


@cli.command(name='forecast')
@click.option(
    '--series', type=click.Path(exists=True, dir_okay=False), default=None,
    help=f'Series file with a year column; {DEFAULT_SERIES} by default.'
)
@click.option(
    '--quantity', default='total_unit_value', show_default=True,
    help='Column of the series to forecast, for example theta.'
)
@click.option('--window', type=int, default=TrainConfig().window, show_default=True)
@click.option('--hidden-size', type=int, default=TrainConfig().hidden_size, show_default=True)
@click.option('--epochs', type=int, default=TrainConfig().epochs, show_default=True)
@click.option('--lr', type=float, default=TrainConfig().learning_rate, show_default=True)
@click.option('--horizon', type=int, default=3, show_default=True)
@click.option(
    '--bounds', type=(float, float), default=None,
    help='Scaling bounds LOW HIGH instead of the range of the series.'
)
@click.option('--seed', type=int, default=None, help='Seed of the initialization.')
@_format_option()
@_out_option()
@click.pass_obj
def forecast_command(
    obj: Dict[str, Any],
    series: Optional[str],
    quantity: str,
    window: int,
    hidden_size: int,
    epochs: int,
    lr: float,
    horizon: int,
    bounds: Optional[Tuple[float, float]],
    seed: Optional[int],
    fmt: str,
    out: Optional[str]
) -> None:
    """Train a recurrent cell on a series and forecast it."""
    with _reporting_errors():
        if seed is None:
            seed = obj.get('seed')

        config = TrainConfig(
            window=window,
            hidden_size=hidden_size,
            epochs=epochs,
            learning_rate=lr,
            seed=seed if seed is not None else 0,
        )
        dataset = read_series(series or _default_series(), quantity, bounds)
        model = fit(dataset, config)

        _emit(
            ForecastReport(
                quantity=quantity,
                config=config,
                initial_loss=model.initial_loss,
                final_loss=model.final_loss,
                points=model.forecast(dataset, horizon),
            ),
            fmt,
            out
        )


def _load_and_run(name: str, tables: Optional[List[GradeTable]]) -> RunRecord:
    tree = build_default_factor_tree()
    return run_pipeline(load_scenario(name, tree=tree), tree=tree, tables=tables)


async def run_scenarios(
    names: Sequence[str],
    tables: Optional[Sequence[GradeTable]] = None
) -> List[Union[RunRecord, Exception]]:
    """Run the pipeline on every scenario, each in its own worker thread.

    A failing scenario does not stop the others.

    Parameters:
        names: Scenario files or names in the data directory.
        tables: Grade tables for every scenario instead of their own.

    Returns:
        The record of each scenario or the error it failed with, in order.
    """
    results: List[Union[RunRecord, Exception]] = [
        EsvError('The scenario was not run')
    ] * len(names)

    async def worker(index: int, name: str) -> None:
        try:
            results[index] = await anyio.to_thread.run_sync(
                _load_and_run, name, list(tables) if tables is not None else None
            )
        except (EsvError, ValueError) as exc:
            results[index] = exc

    async with anyio.create_task_group() as tasks:
        for index, name in enumerate(names):
            tasks.start_soon(worker, index, name)

    return results


def _runs_dir(out: Optional[str]) -> Optional[Path]:
    if out is not None:
        return Path(out)

    if os.environ.get(DATA_DIR_ENV):
        return data_dir() / RUNS_DIR
    return None


@cli.command()
@click.option(
    '--scenario', 'scenarios', multiple=True,
    help=f'Scenario to run, repeatable; {DEFAULT_SCENARIO} by default.'
)
@_grade_tables_option()
@_format_option()
@click.option(
    '--out', type=click.Path(file_okay=False), default=None,
    help=(
        f'Directory to persist the records to; ${DATA_DIR_ENV}/{RUNS_DIR} when '
        f'${DATA_DIR_ENV} is set. Without either the records are only printed.'
    )
)
def run(
    scenarios: Tuple[str, ...],
    grade_tables: Optional[str],
    fmt: str,
    out: Optional[str]
) -> None:
    """Run the whole pipeline on one or more scenarios concurrently.

    Records are written to --out, or to $ESV_DATA_DIR/runs when only the
    data directory is configured. Otherwise nothing is written to disk.
    """
    names = list(scenarios) or [DEFAULT_SCENARIO]
    with _reporting_errors():
        tables = read_grade_tables(grade_tables) if grade_tables is not None else None
    results = anyio.run(run_scenarios, names, tables)

    target = _runs_dir(out)
    code = 0
    records = []
    for name, result in zip(names, results):
        if isinstance(result, Exception):
            click.echo(f'Error: {name}: {result}', err=True)
            code = max(code, exit_code(result))
            continue

        records.append(result)
        if target is not None:
            try:
                target.mkdir(parents=True, exist_ok=True)
                path = target / f'{result.scenario_name}.record.json'
                path.write_text(render(result, 'structured'), encoding='utf-8')
            except OSError as exc:
                click.echo(f'Error: cannot persist {name!r}: {exc.strerror}', err=True)
                code = max(code, 1)
                continue
            _log.info(f'Persisted the record of {name!r} to {str(path)!r}.')

    if fmt == 'structured' and len(records) > 1:
        click.echo(dump_json([record.to_data() for record in records], pretty=True))
    else:
        for record in records:
            click.echo(render(record, fmt), nl=False)  # type: ignore[arg-type]

    if code:
        raise click.exceptions.Exit(code)


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Entry point of the `esv` command.

    Usage errors exit with 1 like every other input error.
    """
    try:
        code = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name='esv',
            standalone_mode=False
        )
    except click.ClickException as exc:
        exc.show()
        code = 1
    except click.Abort:
        click.echo('Aborted!', err=True)
        code = 1

    sys.exit(code if isinstance(code, int) else 0)
