import csv
import hashlib
import os
from pathlib import Path
from typing import Any, Collection, Dict, List, Mapping, Optional, Tuple, Union

import attrs
from esv.appraisal import ProjectLedger
from esv.fuzzy import (
    CRISP, DEFAULT_SCORES, Calibration, MembershipMode, ObservationSet,
    Trapezoidal
)
from esv.models import (
    SCHEMA_VERSION, CrossRefError, EvaluationMatrix, FactorTree, GradeTable,
    InvalidGradeTable, Orientation, ParseError, SchemaVersionMismatch,
    build_default_factor_tree, dump_json, load_grade_tables, read_json_file,
    validate_matrix
)
from esv.valuation import DEFAULT_FORMULA, MarineInputs, UrbanParams
from typing_extensions import Final, Self

__all__ = (
    'DATA_DIR_ENV',
    'SCENARIO_SUFFIX',
    'Options',
    'Scenario',
    'data_dir',
    'find_scenario',
    'read_matrix',
    'read_grade_tables',
    'load_scenario',
)


DATA_DIR_ENV: Final[str] = 'ESV_DATA_DIR'
SCENARIO_SUFFIX: Final[str] = '.scenario'

SHIPPED_DATA: Final[Path] = Path(__file__).parent / 'data'

_TOP_LEVEL: Final = (
    'schema_version', 'name', 'observations', 'matrix', 'prior', 'factor_weights',
    'grade_tables', 'marine', 'urban', 'ledger', 'options',
)


def data_dir() -> Path:
    """The directory scenarios are looked up in and runs are persisted to.

    This is `$ESV_DATA_DIR` when set and the shipped data otherwise.
    """
    configured = os.environ.get(DATA_DIR_ENV)
    return Path(configured) if configured else SHIPPED_DATA


def find_scenario(name: Union[str, Path]) -> Path:
    """Resolve a scenario path or a bare scenario name.

    A path that exists is returned as is. Otherwise the name is looked up in
    `data_dir()` and then in the shipped data, with and without the
    `.scenario` suffix.

    Raises:
        ParseError: No scenario could be found.
    """
    path = Path(name)
    if path.is_file():
        return path

    for directory in dict.fromkeys((data_dir(), SHIPPED_DATA)):
        for candidate in (directory / path, directory / f'{path}{SCENARIO_SUFFIX}'):
            if candidate.is_file():
                return candidate

    raise ParseError('<scenario>', f'no scenario found for {str(name)!r}')


def _check_keys(data: Mapping[str, Any], allowed: Collection[str], field: str) -> None:
    for key in data:
        if key not in allowed:
            raise ParseError(f'{field}.{key}' if field else str(key), 'unknown field')


def _section(data: Mapping[str, Any], key: str, field: str = '') -> Mapping[str, Any]:
    path = f'{field}.{key}' if field else key
    if key not in data:
        raise ParseError(path, 'missing field')

    value = data[key]
    if not isinstance(value, Mapping):
        raise ParseError(path, 'expected a mapping')
    return value


def _numbers(value: Any, field: str) -> List[float]:
    if not isinstance(value, list):
        raise ParseError(field, 'expected a list of numbers')
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ParseError(field, 'expected a list of numbers')
    return [float(item) for item in value]


def read_matrix(path: Union[str, Path]) -> EvaluationMatrix:
    """Read a comma-separated evaluation matrix, one state per row.

    Blank lines and lines starting with `#` are skipped.

    Raises:
        ParseError: The file cannot be read or an entry is not a number.
    """
    field = str(path)
    rows: List[List[float]] = []
    try:
        with open(path, newline='', encoding='utf-8') as file:
            reader = csv.reader(file)
            for row in reader:
                if not row or row[0].lstrip().startswith('#'):
                    continue
                try:
                    rows.append([float(entry) for entry in row])
                except ValueError:
                    raise ParseError(field, 'expected numbers', line=reader.line_num) from None
    except OSError as exc:
        raise ParseError(field, f'cannot read file: {exc.strerror}') from exc

    return validate_matrix(rows)


def _check_grade_tables(
    tables: Collection[GradeTable],
    tree: FactorTree,
    field: str
) -> Tuple[GradeTable, ...]:
    by_name = {table.sub_factor: table for table in tables}
    for name in by_name:
        if name not in tree:
            raise CrossRefError(field, name)

    ordered = []
    for sub in tree.leaves():
        if sub.name not in by_name:
            raise ParseError(f'{field}.{sub.name}', 'missing field')

        table = by_name[sub.name]
        if table.orientation is not Orientation.from_direction(sub.direction):
            raise InvalidGradeTable(
                sub.name,
                f'orientation {table.orientation.value} contradicts the sub-factor direction'
            )
        ordered.append(table)

    return tuple(ordered)


def read_grade_tables(
    path: Union[str, Path],
    tree: Optional[FactorTree] = None
) -> Tuple[GradeTable, ...]:
    """Read a grade table data file and check it against a factor tree.

    Parameters:
        path: A JSON document in the grade table schema.
        tree: The factor hierarchy; the default one if not given.

    Raises:
        ParseError: The file is malformed or a sub-factor has no table.
        CrossRefError: A table names a sub-factor outside the tree.
        InvalidGradeTable: A table runs against the direction of its sub-factor.

    Returns:
        One table per sub-factor of the tree, in column order.
    """
    tree = tree or build_default_factor_tree()
    return _check_grade_tables(load_grade_tables(path), tree, str(path))


def _parse_grade_tables(
    value: Any,
    base: Optional[Path],
    tree: FactorTree
) -> Tuple[GradeTable, ...]:
    if isinstance(value, str):
        path = Path(value)
        if base is not None and not path.is_absolute():
            path = base / path
        return _check_grade_tables(load_grade_tables(path), tree, 'grade_tables')

    if not isinstance(value, Mapping):
        raise ParseError('grade_tables', 'expected a file path or a mapping of grades')

    tables = []
    for name, grades in value.items():
        if not isinstance(grades, Mapping):
            raise ParseError(f'grade_tables.{name}', 'expected a mapping')
        tables.append(GradeTable.from_data(str(name), grades, f'grade_tables.{name}'))

    return _check_grade_tables(tables, tree, 'grade_tables')


def _parse_membership(value: Any) -> MembershipMode:
    if value == 'crisp':
        return CRISP
    if isinstance(value, Mapping) and set(value) == {'trapezoidal'}:
        width = value['trapezoidal']
        if isinstance(width, (int, float)) and not isinstance(width, bool):
            return Trapezoidal(width)
    raise ParseError('options.membership', 'expected "crisp" or {"trapezoidal": <width>}')


@attrs.define(frozen=True, kw_only=True)
class Options:
    """Choices of a scenario that are not data.

    Attributes:
        membership: The membership construction.
        grade_scores: Scores of the grades used to defuzzify.
        uniform_fallback: Use uniform weights when every indicator has
            maximal entropy.
        avoided_degradation: Benefit credited alongside the environmental
            cost, $, or None to credit nothing.
        discount_rate: Annual discount rate of the environmental cost.
    """

    membership: MembershipMode = CRISP
    grade_scores: Tuple[float, ...] = attrs.field(default=DEFAULT_SCORES, converter=tuple)
    uniform_fallback: bool = False
    avoided_degradation: Optional[float] = None
    discount_rate: float = 0.0

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        _check_keys(data, [a.name for a in attrs.fields(cls)], 'options')

        kwargs: Dict[str, Any] = {}
        if 'membership' in data:
            kwargs['membership'] = _parse_membership(data['membership'])
        if 'grade_scores' in data:
            kwargs['grade_scores'] = _numbers(data['grade_scores'], 'options.grade_scores')
        if 'uniform_fallback' in data:
            if not isinstance(data['uniform_fallback'], bool):
                raise ParseError('options.uniform_fallback', 'expected a boolean')
            kwargs['uniform_fallback'] = data['uniform_fallback']
        for key in ('avoided_degradation', 'discount_rate'):
            value = data.get(key)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(f'options.{key}', 'expected a number')
            kwargs[key] = float(value)

        return cls(**kwargs)

    def to_data(self) -> Dict[str, Any]:
        return {
            'membership': self.membership.to_data(),
            'grade_scores': list(self.grade_scores),
            'uniform_fallback': self.uniform_fallback,
            'avoided_degradation': self.avoided_degradation,
            'discount_rate': self.discount_rate,
        }


def _parse_prior(value: Any, tree: FactorTree) -> Tuple[float, ...]:
    leaves = [sub.name for sub in tree.leaves()]

    if isinstance(value, Mapping):
        for name in value:
            if name not in tree:
                raise CrossRefError('prior', name)
        missing = [name for name in leaves if name not in value]
        if missing:
            raise ParseError(f'prior.{missing[0]}', 'missing field')
        return tuple(_numbers([value[name] for name in leaves], 'prior'))

    prior = _numbers(value, 'prior')
    if len(prior) != len(leaves):
        raise ParseError('prior', f'expected {len(leaves)} weights, got {len(prior)}')
    return tuple(prior)


@attrs.define(frozen=True, kw_only=True, eq=False)
class Scenario:
    """Everything one run of the pipeline reads.

    Attributes:
        name: Name of the scenario.
        observations: The observed sub-factor values.
        matrix: The evaluation matrix the indicator weights are derived from.
        prior: Prior indicator weights to combine with, if any.
        factor_weights: Explicit factor weights overriding the derived ones.
        grade_tables: Grade tables replacing the shipped ones, one per
            sub-factor in column order.
        marine: Inputs of the marine services.
        urban: Urban parameters, without the value of the grade.
        calibration: Map from the defuzzified grade to money.
        formula: Name of the urban formula.
        ledger: The project ledger.
        options: Remaining choices.
        source: The file the scenario was loaded from.
    """

    name: str
    observations: ObservationSet
    matrix: EvaluationMatrix
    prior: Optional[Tuple[float, ...]] = None
    factor_weights: Optional[Tuple[float, ...]] = None
    grade_tables: Optional[Tuple[GradeTable, ...]] = None
    marine: MarineInputs
    urban: UrbanParams
    calibration: Calibration
    formula: str = DEFAULT_FORMULA
    ledger: ProjectLedger
    options: Options = Options()
    source: Optional[Path] = None

    def to_data(self) -> Dict[str, Any]:
        """The scenario as a self-contained document, with the matrix inline."""
        urban = self.urban.to_data()
        del urban['rho']
        urban['calibration'] = self.calibration.to_data()
        urban['formula'] = self.formula

        return {
            'schema_version': SCHEMA_VERSION,
            'name': self.name,
            'observations': self.observations.to_data(),
            'matrix': self.matrix.to_data(),
            'prior': list(self.prior) if self.prior is not None else None,
            'factor_weights': (
                list(self.factor_weights) if self.factor_weights is not None else None
            ),
            'grade_tables': (
                {table.sub_factor: table.to_data() for table in self.grade_tables}
                if self.grade_tables is not None else None
            ),
            'marine': self.marine.to_data(),
            'urban': urban,
            'ledger': self.ledger.to_data(),
            'options': self.options.to_data(),
        }

    def digest(self) -> str:
        """SHA-256 of the canonical document of the scenario."""
        return hashlib.sha256(dump_json(self.to_data()).encode('utf-8')).hexdigest()

    @classmethod
    def from_data(
        cls,
        data: Mapping[str, Any],
        *,
        base: Optional[Path] = None,
        tree: Optional[FactorTree] = None
    ) -> Self:
        """Validate a scenario document.

        Parameters:
            data: The decoded document.
            base: Directory relative matrix and grade table paths are resolved against.
            tree: The factor hierarchy; the default one if not given.

        Raises:
            ParseError: A field is missing, unknown or malformed.
            SchemaVersionMismatch: The document has another schema version.
            CrossRefError: A sub-factor name does not resolve.
            InvalidGradeTable: A grade table contradicts its sub-factor.
        """
        if not isinstance(data, Mapping):
            raise ParseError('<scenario>', 'expected a mapping at the top level')

        version = data.get('schema_version')
        if version != SCHEMA_VERSION:
            raise SchemaVersionMismatch(SCHEMA_VERSION, version)

        _check_keys(data, _TOP_LEVEL, '')
        tree = tree or build_default_factor_tree()

        section = _section(data, 'observations')
        _check_keys(section, ('period', 'values'), 'observations')
        observations = ObservationSet.from_data(section)
        observations.check(tree)

        if 'matrix' not in data:
            raise ParseError('matrix', 'missing field')
        raw = data['matrix']
        if isinstance(raw, str):
            path = Path(raw)
            if base is not None and not path.is_absolute():
                path = base / path
            matrix = read_matrix(path)
        elif isinstance(raw, list):
            if not all(isinstance(row, list) for row in raw):
                raise ParseError('matrix', 'expected a list of rows')
            matrix = validate_matrix([_numbers(row, 'matrix') for row in raw])
        else:
            raise ParseError('matrix', 'expected a file path or a list of rows')

        prior = data.get('prior')
        factor_weights = data.get('factor_weights')
        grade_tables = data.get('grade_tables')

        marine = _section(data, 'marine')
        _check_keys(
            marine, ('climate', 'pollution', 'landscape', 'fishery', 'sea_area'), 'marine'
        )
        for key, allowed in (
            ('climate', ('cost1', 'cost2')),
            ('pollution', ('pollutants', 'q', 'depth')),
            ('landscape', ('importance', 'use', 'unit_value')),
            ('fishery', ('revenue', 'cost')),
        ):
            _check_keys(_section(marine, key, 'marine'), allowed, f'marine.{key}')
        for n, item in enumerate(marine['pollution'].get('pollutants', [])):
            if not isinstance(item, Mapping):
                raise ParseError(f'marine.pollution.pollutants[{n}]', 'expected a mapping')
            _check_keys(
                item, ('capacity', 'treatment_cost'), f'marine.pollution.pollutants[{n}]'
            )

        urban = _section(data, 'urban')
        _check_keys(
            urban,
            ('sigma', 'p0', 'environmental_cost', 'area', 'calibration', 'p0_reference',
             'formula'),
            'urban'
        )
        if 'calibration' not in urban:
            raise ParseError('urban.calibration', 'missing field')
        formula = urban.get('formula', DEFAULT_FORMULA)
        if not isinstance(formula, str):
            raise ParseError('urban.formula', 'expected the name of a formula')

        ledger = _section(data, 'ledger')
        _check_keys(
            ledger,
            ('tangible_costs', 'intangible_costs', 'benefits', 'area', 'horizon_years'),
            'ledger'
        )

        options = data.get('options', {})
        if not isinstance(options, Mapping):
            raise ParseError('options', 'expected a mapping')

        return cls(
            name=str(data.get('name', 'unnamed')),
            observations=observations,
            matrix=matrix,
            prior=_parse_prior(prior, tree) if prior is not None else None,
            factor_weights=(
                tuple(_numbers(factor_weights, 'factor_weights'))
                if factor_weights is not None else None
            ),
            grade_tables=(
                _parse_grade_tables(grade_tables, base, tree)
                if grade_tables is not None else None
            ),
            marine=MarineInputs.from_data(marine),
            urban=UrbanParams.from_data(
                {k: v for k, v in urban.items() if k not in ('calibration', 'formula')}
            ),
            calibration=Calibration.from_data(urban['calibration'], 'urban.calibration'),
            formula=formula,
            ledger=ProjectLedger.from_data(ledger),
            options=Options.from_data(options),
        )


def load_scenario(path: Union[str, Path], *, tree: Optional[FactorTree] = None) -> Scenario:
    """Load and validate a scenario file.

    Parameters:
        path: A scenario file, or the name of one in the data directory.
        tree: The factor hierarchy; the default one if not given.

    Raises:
        ParseError: The file is missing or malformed.
        SchemaVersionMismatch: The file has another schema version.
        CrossRefError: A sub-factor name does not resolve.
    """
    resolved = find_scenario(path)
    data = read_json_file(resolved, str(resolved))

    scenario = Scenario.from_data(data, base=resolved.parent, tree=tree)
    return attrs.evolve(scenario, source=resolved)

