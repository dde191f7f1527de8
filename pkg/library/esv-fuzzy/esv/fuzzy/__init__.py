from ._errors import (
    DimensionMismatch,
    InvalidCalibration,
    InvalidMembershipMode,
    InvalidScores,
    MissingObservation,
    NonFiniteObservation,
)
from ._evaluate import (
    DEFAULT_SCORES,
    Calibration,
    FuzzyResult,
    defuzzify,
    evaluate,
    fuzzy_evaluate,
    normalize_weights,
    rho_from_grade,
)
from ._membership import (
    CRISP,
    Crisp,
    MembershipMode,
    Trapezoidal,
    membership,
)
from ._relation import (
    ObservationSet,
    RelationMatrix,
    build_relation_matrix,
)

__all__ = (
    'DimensionMismatch',
    'InvalidCalibration',
    'InvalidMembershipMode',
    'InvalidScores',
    'MissingObservation',
    'NonFiniteObservation',
    'DEFAULT_SCORES',
    'Calibration',
    'FuzzyResult',
    'defuzzify',
    'evaluate',
    'fuzzy_evaluate',
    'normalize_weights',
    'rho_from_grade',
    'CRISP',
    'Crisp',
    'MembershipMode',
    'Trapezoidal',
    'membership',
    'ObservationSet',
    'RelationMatrix',
    'build_relation_matrix',
)
