from ._cell import (
    Gates,
    LstmCell,
    LstmState,
    logistic,
    lstm_step,
)
from ._errors import (
    DegenerateBounds,
    InsufficientData,
    InvalidSeries,
    ShapeMismatch,
)
from ._series import (
    SeriesDataset,
    read_series,
)
from ._train import (
    CellGradients,
    TrainConfig,
    TrainedModel,
    fit,
    forecast,
    loss_and_gradients,
    train,
)

__all__ = (
    'Gates',
    'LstmCell',
    'LstmState',
    'logistic',
    'lstm_step',
    'DegenerateBounds',
    'InsufficientData',
    'InvalidSeries',
    'ShapeMismatch',
    'SeriesDataset',
    'read_series',
    'CellGradients',
    'TrainConfig',
    'TrainedModel',
    'fit',
    'forecast',
    'loss_and_gradients',
    'train',
)
