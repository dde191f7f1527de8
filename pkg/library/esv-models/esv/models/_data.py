from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

from typing_extensions import Final

from ._errors import InvalidGradeTable, ParseError, SchemaVersionMismatch
from ._grades import GradeTable, Orientation
from ._tree import FactorTree
from ._utils import dump_json, read_json_file

__all__ = (
    'SCHEMA_VERSION',
    'DEFAULT_DATA_FILE',
    'load_factor_tree',
    'load_grade_tables',
    'dump_grade_tables',
    'build_default_factor_tree',
    'build_default_grade_tables',
)


SCHEMA_VERSION: Final[int] = 1
DEFAULT_DATA_FILE: Final[Path] = Path(__file__).parent / 'data' / 'grade_tables.json'


def _read(path: Union[str, Path]) -> Mapping[str, Any]:
    data = read_json_file(path)
    if not isinstance(data, dict):
        raise ParseError('<root>', 'expected a JSON object')

    version = data.get('schema_version')
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(SCHEMA_VERSION, version)

    return data


def _parse(data: Mapping[str, Any]) -> Tuple[FactorTree, List[GradeTable]]:
    try:
        tree = FactorTree.from_data(data)
    except (KeyError, TypeError) as exc:
        raise ParseError('factors', f'malformed factor entry ({exc!r})') from None

    tables = []
    for f, factor in enumerate(data['factors']):
        for j, sub in enumerate(factor['sub_factors']):
            field = f'factors[{f}].sub_factors[{j}]'
            if 'grades' not in sub:
                raise ParseError(f'{field}.grades', 'missing field')

            table = GradeTable.from_data(sub['name'], sub['grades'], f'{field}.grades')

            expected = Orientation.from_direction(tree.sub_factor(table.sub_factor).direction)
            if table.orientation is not expected:
                raise InvalidGradeTable(
                    table.sub_factor,
                    f'orientation {table.orientation.value} contradicts the '
                    f'sub-factor direction'
                )
            tables.append(table)

    return tree, tables


def load_factor_tree(path: Union[str, Path]) -> FactorTree:
    """Load the factor hierarchy from a grade table data file.

    Parameters:
        path: Path to a JSON document in the grade table schema.

    Returns:
        The validated factor tree.
    """
    return _parse(_read(path))[0]


def load_grade_tables(path: Union[str, Path]) -> List[GradeTable]:
    """Load grade tables from a data file, in sub-factor column order.

    Parameters:
        path: Path to a JSON document in the grade table schema.

    Returns:
        One grade table per sub-factor of the file's factor tree.
    """
    return _parse(_read(path))[1]


def dump_grade_tables(
    tree: FactorTree,
    tables: Union[Sequence[GradeTable], Mapping[str, GradeTable]]
) -> str:
    """Serialize a factor tree and its grade tables into the data file schema.

    Parameters:
        tree: The factor hierarchy to write.
        tables: The grade tables, either as a sequence or keyed by sub-factor.

    Returns:
        The JSON document, loadable with `load_grade_tables()`.
    """
    if not isinstance(tables, Mapping):
        tables = {table.sub_factor: table for table in tables}

    data: Dict[str, Any] = tree.to_data()
    for factor in data['factors']:
        for sub in factor['sub_factors']:
            sub['grades'] = tables[sub['name']].to_data()

    data['schema_version'] = SCHEMA_VERSION
    return dump_json(data, pretty=True)


@lru_cache(maxsize=None)
def _defaults() -> Tuple[FactorTree, Tuple[GradeTable, ...]]:
    tree, tables = _parse(_read(DEFAULT_DATA_FILE))
    return tree, tuple(tables)


def build_default_factor_tree() -> FactorTree:
    """Return the shipped five by four evaluation hierarchy."""
    return _defaults()[0]


def build_default_grade_tables() -> List[GradeTable]:
    """Return the shipped grade tables, one per sub-factor in column order."""
    return list(_defaults()[1])
