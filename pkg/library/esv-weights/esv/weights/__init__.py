from ._entropy import (
    EntropyReport,
    combine_with_prior,
    column_shares,
    entropy_report,
    entropy_weights,
    group_by_factor,
    index_entropies,
    system_entropy,
)
from ._errors import (
    AllMaxEntropy,
    AllZeroColumn,
    LengthMismatch,
    NotNormalized,
    SingleRow,
    ZeroOverlap,
)

__all__ = (
    'EntropyReport',
    'combine_with_prior',
    'column_shares',
    'entropy_report',
    'entropy_weights',
    'group_by_factor',
    'index_entropies',
    'system_entropy',
    'AllMaxEntropy',
    'AllZeroColumn',
    'LengthMismatch',
    'NotNormalized',
    'SingleRow',
    'ZeroOverlap',
)
