import copy
import json
from pathlib import Path
from typing import Any, Dict

import pytest
from click.testing import CliRunner
from esv.cli import (
    DATA_DIR_ENV, RunRecord, StageError, cli, find_scenario, load_record, main,
    run_scenarios
)
from esv.models import (
    Grade, GradeTable, build_default_factor_tree, build_default_grade_tables,
    dump_grade_tables, read_json_file
)

# City L 2019 under the entropy weights of its 2014-2019 indicator matrix; the
# shipped calibration maps this grade to 0.56 $/m2 a
CITY_L_SCALAR = 0.741917565590
CITY_L_TOTAL = 1.61
CITY_L_RATIO_WITH = 1.63 / (2.8 + 0.2 * CITY_L_TOTAL)

NATURAL_GROWTH = 'Natural population growth rate'


def city_l() -> Dict[str, Any]:
    path = find_scenario('city_l')
    data = read_json_file(path, str(path))
    data['matrix'] = str(path.parent / data['matrix'])
    return copy.deepcopy(data)


def write(path: Path, data: Any) -> Path:
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def flat_scenario(tmp_path: Path) -> Path:
    data = city_l()
    data['name'] = 'flat'
    data['matrix'] = [[1.0] * 20] * 3
    return write(tmp_path / 'flat.scenario', data)


def shifted_tables(path: Path) -> Path:
    """Grade tables under which a natural growth rate of 0.9 is Top, not Excellent."""
    tables = {table.sub_factor: table for table in build_default_grade_tables()}
    tables[NATURAL_GROWTH] = GradeTable.from_data(
        NATURAL_GROWTH, {'orientation': 'descending', 'bounds': [0.5, 2.0, 4.5, 5.0]}
    )
    path.write_text(dump_grade_tables(build_default_factor_tree(), tables), encoding='utf-8')
    return path


@pytest.fixture
def runner(monkeypatch: pytest.MonkeyPatch) -> CliRunner:
    monkeypatch.delenv(DATA_DIR_ENV, raising=False)
    return CliRunner()


def invoke(runner: CliRunner, *args: str) -> Any:
    return runner.invoke(cli, list(args), catch_exceptions=False)


class TestWeights:
    def test_scenario(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / 'weights.json'
        result = invoke(runner, 'weights', '--format', 'structured', '--out', str(out))

        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert len(data['weights']) == 20
        assert sum(data['weights']) == pytest.approx(1)

    def test_text(self, runner: CliRunner) -> None:
        result = invoke(runner, 'weights')

        assert result.exit_code == 0
        assert 'Indicator weights' in result.output

    def test_flat_matrix(self, runner: CliRunner, tmp_path: Path) -> None:
        matrix = tmp_path / 'flat.csv'
        matrix.write_text('1,1,1\n1,1,1\n', encoding='utf-8')

        result = invoke(runner, 'weights', '--matrix', str(matrix))
        assert result.exit_code == 2
        assert 'weights stage failed' in result.output

        out = tmp_path / 'weights.json'
        result = invoke(
            runner, 'weights', '--matrix', str(matrix), '--uniform-fallback',
            '--format', 'structured', '--out', str(out)
        )
        assert result.exit_code == 0
        assert json.loads(out.read_text())['weights'] == pytest.approx([1 / 3] * 3)


class TestEvaluate:
    def test_scenario(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / 'fuzzy.json'
        result = invoke(
            runner, 'evaluate', '--scenario', 'city_l', '--format', 'structured',
            '--out', str(out)
        )

        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data['grade'] == 'excellent'
        assert data['rho'] == pytest.approx(0.56, abs=1e-9)

    def test_observations_only(self, runner: CliRunner, tmp_path: Path) -> None:
        observations = write(tmp_path / 'observations.json', city_l()['observations'])
        out = tmp_path / 'fuzzy.json'

        result = invoke(
            runner, 'evaluate', '--observations', str(observations), '--top-value', '2',
            '--format', 'structured', '--out', str(out)
        )

        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data['theta_vector'] == pytest.approx([0.15, 0.65, 0.2, 0, 0])
        assert data['theta_scalar'] == pytest.approx(0.69)
        assert data['rho'] == pytest.approx(1.38)

    def test_factor_weights(self, runner: CliRunner, tmp_path: Path) -> None:
        weights = write(tmp_path / 'weights.json', [1, 1, 1, 1, 2])
        out = tmp_path / 'fuzzy.json'

        result = invoke(
            runner, 'evaluate', '--scenario', 'city_l', '--weights', str(weights),
            '--format', 'structured', '--out', str(out)
        )

        assert result.exit_code == 0
        assert json.loads(out.read_text())['grade'] == 'top'

    def test_grade_tables(self, runner: CliRunner, tmp_path: Path) -> None:
        tables = shifted_tables(tmp_path / 'tables.json')
        out = tmp_path / 'fuzzy.json'

        result = invoke(
            runner, 'evaluate', '--scenario', 'city_l', '--grade-tables', str(tables),
            '--format', 'structured', '--out', str(out)
        )

        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data['grade'] == 'top'
        assert data['theta_scalar'] < CITY_L_SCALAR

    def test_scenario_grade_tables(self, runner: CliRunner, tmp_path: Path) -> None:
        shifted_tables(tmp_path / 'tables.json')
        data = city_l()
        data['grade_tables'] = 'tables.json'
        scenario = write(tmp_path / 'shifted.scenario', data)
        out = tmp_path / 'fuzzy.json'

        result = invoke(
            runner, 'evaluate', '--scenario', str(scenario), '--format', 'structured',
            '--out', str(out)
        )

        assert result.exit_code == 0
        assert json.loads(out.read_text())['grade'] == 'top'

    def test_contradicting_grade_tables(self, runner: CliRunner, tmp_path: Path) -> None:
        tables = {table.sub_factor: table for table in build_default_grade_tables()}
        tables[NATURAL_GROWTH] = GradeTable.from_data(
            NATURAL_GROWTH, {'orientation': 'ascending', 'bounds': [1.0, 2.0, 4.5, 5.0]}
        )
        path = tmp_path / 'tables.json'
        path.write_text(dump_grade_tables(build_default_factor_tree(), tables), encoding='utf-8')

        result = invoke(runner, 'evaluate', '--scenario', 'city_l', '--grade-tables', str(path))
        assert result.exit_code == 1

    def test_nothing_to_evaluate(self, runner: CliRunner) -> None:
        result = invoke(runner, 'evaluate')

        assert result.exit_code == 1
        assert '--observations' in result.output

    def test_unknown_sub_factor(self, runner: CliRunner, tmp_path: Path) -> None:
        observations = city_l()['observations']
        observations['values']['Number of cinemas'] = 3
        path = write(tmp_path / 'observations.json', observations)

        assert invoke(runner, 'evaluate', '--observations', str(path)).exit_code == 1


class TestValue:
    def test_evaluated(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / 'valuation.json'
        result = invoke(runner, 'value', '--format', 'structured', '--out', str(out))

        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data['total_unit_value'] == pytest.approx(CITY_L_TOTAL, abs=1e-6)

    def test_rho(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / 'valuation.json'
        result = invoke(
            runner, 'value', '--rho', '0', '--format', 'structured', '--out', str(out)
        )

        assert result.exit_code == 0
        assert json.loads(out.read_text())['components']['urban'] == 0


class TestCbr:
    def test_default(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / 'cbr.json'
        result = invoke(runner, 'cbr', '--format', 'structured', '--out', str(out))

        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data['ratio_without'] == pytest.approx(1.63 / 2.8)
        assert data['ratio_with'] == pytest.approx(CITY_L_RATIO_WITH, rel=1e-9)

    def test_discount_rate(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / 'cbr.json'
        result = invoke(
            runner, 'cbr', '--discount-rate', '0.05', '--format', 'structured',
            '--out', str(out)
        )

        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data['discount_rate'] == 0.05
        assert data['environmental_cost'] < CITY_L_TOTAL * 2.0e8

    def test_valuation_from_record(self, runner: CliRunner, tmp_path: Path) -> None:
        assert invoke(runner, 'run', '--out', str(tmp_path)).exit_code == 0

        out = tmp_path / 'cbr.json'
        result = invoke(
            runner, 'cbr', '--valuation', str(tmp_path / 'city_l.record.json'),
            '--format', 'structured', '--out', str(out)
        )

        assert result.exit_code == 0
        assert json.loads(out.read_text())['ratio_with'] == pytest.approx(
            CITY_L_RATIO_WITH, rel=1e-6
        )


class TestForecast:
    def test_shipped_series(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / 'forecast.json'
        result = invoke(
            runner, 'forecast', '--epochs', '20', '--horizon', '2', '--format', 'structured',
            '--out', str(out)
        )

        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert [point['year'] for point in data['points']] == [2020, 2021]
        assert data['config']['epochs'] == 20

    def test_group_seed(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / 'forecast.json'
        result = invoke(
            runner, '--seed', '9', 'forecast', '--quantity', 'theta', '--epochs', '5',
            '--format', 'structured', '--out', str(out)
        )

        assert result.exit_code == 0
        assert json.loads(out.read_text())['config']['seed'] == 9

    def test_short_series(self, runner: CliRunner, tmp_path: Path) -> None:
        series = tmp_path / 'series.csv'
        series.write_text('year,total_unit_value\n2018,1.5\n2019,1.6\n', encoding='utf-8')

        result = invoke(runner, 'forecast', '--series', str(series))
        assert result.exit_code == 1

    def test_constant_series(self, runner: CliRunner, tmp_path: Path) -> None:
        series = tmp_path / 'series.csv'
        series.write_text(
            'year,total_unit_value\n' + ''.join(f'{year},1.5\n' for year in range(2010, 2020)),
            encoding='utf-8'
        )

        result = invoke(runner, 'forecast', '--series', str(series), '--epochs', '5')
        assert result.exit_code == 2


class TestRun:
    def test_persists(self, runner: CliRunner, tmp_path: Path) -> None:
        result = invoke(runner, 'run', '--out', str(tmp_path))

        assert result.exit_code == 0
        assert 'Scenario city_l' in result.output
        record = load_record(tmp_path / 'city_l.record.json')
        assert record.valuation.total_unit_value == pytest.approx(CITY_L_TOTAL, abs=1e-6)

    def test_data_dir(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path))
        data = city_l()
        data['name'] = 'coast'
        write(tmp_path / 'coast.scenario', data)

        result = CliRunner().invoke(cli, ['run', '--scenario', 'coast'])

        assert result.exit_code == 0
        assert (tmp_path / 'runs' / 'coast.record.json').is_file()

    def test_failure_does_not_stop_others(self, runner: CliRunner, tmp_path: Path) -> None:
        flat = flat_scenario(tmp_path)
        out = tmp_path / 'runs'

        result = invoke(
            runner, 'run', '--scenario', 'city_l', '--scenario', str(flat), '--out', str(out)
        )

        assert result.exit_code == 2
        assert (out / 'city_l.record.json').is_file()
        assert not (out / 'flat.record.json').exists()

    def test_grade_tables(self, runner: CliRunner, tmp_path: Path) -> None:
        tables = shifted_tables(tmp_path / 'tables.json')
        out = tmp_path / 'runs'

        result = invoke(runner, 'run', '--grade-tables', str(tables), '--out', str(out))

        assert result.exit_code == 0
        record = load_record(out / 'city_l.record.json')
        assert record.fuzzy.grade is Grade.top
        assert record.valuation.total_unit_value < CITY_L_TOTAL

    def test_prints_only_without_a_target(
        self, runner: CliRunner, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.chdir(tmp_path)
        runs = find_scenario('city_l').parent / 'runs'

        result = invoke(runner, 'run')

        assert result.exit_code == 0
        assert 'Scenario city_l' in result.output
        assert list(tmp_path.iterdir()) == []
        assert not runs.exists()

    def test_help_states_persistence(self, runner: CliRunner) -> None:
        result = invoke(runner, 'run', '--help')

        assert result.exit_code == 0
        assert 'printed' in result.output

    def test_input_error(self, runner: CliRunner) -> None:
        assert invoke(runner, 'run', '--scenario', 'no-such-scenario').exit_code == 1


@pytest.mark.anyio
async def test_run_scenarios(tmp_path: Path) -> None:
    flat = flat_scenario(tmp_path)

    first, second, third = await run_scenarios(['city_l', str(flat), 'no-such-scenario'])

    assert isinstance(first, RunRecord)
    assert isinstance(second, StageError) and second.stage == 'weights'
    assert not isinstance(third, (RunRecord, StageError))


class TestMain:
    def test_input_error(self, capsys: pytest.CaptureFixture[str]) -> None:
        with pytest.raises(SystemExit) as info:
            main(['evaluate'])

        assert info.value.code == 1
        assert 'Error:' in capsys.readouterr().err

    def test_usage_error(self) -> None:
        with pytest.raises(SystemExit) as info:
            main(['--no-such-option'])
        assert info.value.code == 1

    def test_success(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv(DATA_DIR_ENV, raising=False)

        with pytest.raises(SystemExit) as info:
            main(['value', '--rho', '0.56'])
        assert info.value.code == 0
