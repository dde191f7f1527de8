from ._data import (
    DEFAULT_DATA_FILE,
    SCHEMA_VERSION,
    build_default_factor_tree,
    build_default_grade_tables,
    dump_grade_tables,
    load_factor_tree,
    load_grade_tables,
)
from ._errors import (
    ComputationError,
    CrossRefError,
    EmptyMatrix,
    EsvError,
    InputError,
    InvalidFactorTree,
    InvalidGradeTable,
    InvalidWeights,
    NegativeEntry,
    NonFiniteEntry,
    ParseError,
    RaggedRows,
    SchemaVersionMismatch,
)
from ._grades import (
    GradeTable,
    Orientation,
)
from ._matrix import (
    EvaluationMatrix,
    GradeVector,
    WeightVector,
    validate_matrix,
)
from ._tree import (
    Direction,
    Factor,
    FactorTree,
    Grade,
    SubFactor,
)
from ._utils import (
    TOLERANCE,
    dump_json,
    load_json,
    read_json_file,
)

__all__ = (
    'DEFAULT_DATA_FILE',
    'SCHEMA_VERSION',
    'build_default_factor_tree',
    'build_default_grade_tables',
    'dump_grade_tables',
    'load_factor_tree',
    'load_grade_tables',
    'ComputationError',
    'CrossRefError',
    'EmptyMatrix',
    'EsvError',
    'InputError',
    'InvalidFactorTree',
    'InvalidGradeTable',
    'InvalidWeights',
    'NegativeEntry',
    'NonFiniteEntry',
    'ParseError',
    'RaggedRows',
    'SchemaVersionMismatch',
    'GradeTable',
    'Orientation',
    'EvaluationMatrix',
    'GradeVector',
    'WeightVector',
    'validate_matrix',
    'Direction',
    'Factor',
    'FactorTree',
    'Grade',
    'SubFactor',
    'TOLERANCE',
    'dump_json',
    'load_json',
    'read_json_file',
)
