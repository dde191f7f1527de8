import logging
from typing import Any, Dict, List, Mapping, Tuple

import attrs
import numpy as np
from typing_extensions import Final, Self

from ._cell import Gates, LstmCell, _step
from ._errors import ShapeMismatch
from ._series import SeriesDataset

__all__ = (
    'TrainConfig',
    'CellGradients',
    'TrainedModel',
    'loss_and_gradients',
    'fit',
    'train',
    'forecast',
)


_log = logging.getLogger(__name__)

# Epochs between two debug lines of the training loss.
LOG_INTERVAL: Final[int] = 500


def _positive(instance: Any, attribute: 'attrs.Attribute[Any]', value: Any) -> None:
    if not value > 0:
        raise ValueError(f'{attribute.name} must be positive, got {value!r}')


@attrs.define(frozen=True, kw_only=True)
class TrainConfig:
    """Hyperparameters of training.

    Attributes:
        window: Points fed to the cell to predict the next one.
        hidden_size: Size of the hidden and cell state.
        epochs: Full-batch gradient descent steps.
        learning_rate: Step size of gradient descent.
        seed: Seed of the parameter initialization.
        clip_norm: Largest global norm of a gradient step before rescaling.
    """

    window: int = attrs.field(default=4, validator=_positive)
    hidden_size: int = attrs.field(default=8, validator=_positive)
    epochs: int = attrs.field(default=3000, validator=_positive)
    learning_rate: float = attrs.field(default=0.5, validator=_positive)
    seed: int = 0
    clip_norm: float = attrs.field(default=5.0, validator=_positive)

    def to_data(self) -> Dict[str, Any]:
        return attrs.asdict(self)

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        return cls(**data)


@attrs.define(frozen=True, kw_only=True, eq=False)
class CellGradients:
    """Gradients of the loss, shaped like the parameters of a `LstmCell`."""

    weights: np.ndarray
    bias: np.ndarray
    readout: np.ndarray
    readout_bias: float

    def norm(self) -> float:
        """The global L2 norm over every parameter."""
        return float(np.sqrt(
            np.sum(self.weights ** 2) + np.sum(self.bias ** 2)
            + np.sum(self.readout ** 2) + self.readout_bias ** 2
        ))

    def flatten(self) -> np.ndarray:
        return np.concatenate([
            self.weights.ravel(), self.bias, self.readout, [self.readout_bias]
        ])


def loss_and_gradients(
    cell: LstmCell,
    inputs: np.ndarray,
    targets: np.ndarray
) -> Tuple[float, CellGradients]:
    """Mean squared error of the readout after each window, with its gradients.

    The whole batch is run forward from a zero state and the gradients are
    backpropagated through every step of the windows.

    Parameters:
        cell: The parameters.
        inputs: Windows of shape `(B, T, D)`.
        targets: One target per window, shape `(B,)`.

    Raises:
        ShapeMismatch: The inputs or targets do not fit the cell.

    Returns:
        The loss and its gradients.
    """
    inputs = np.asarray(inputs, dtype=float)
    targets = np.asarray(targets, dtype=float)

    if inputs.ndim != 3 or inputs.shape[2] != cell.input_size:
        raise ShapeMismatch(
            f'Expected windows of shape (B, T, {cell.input_size}), got {inputs.shape}'
        )
    if targets.shape != inputs.shape[:1]:
        raise ShapeMismatch(f'Expected {inputs.shape[0]} targets, got shape {targets.shape}')

    batch, steps, _ = inputs.shape
    hidden = cell.hidden_size

    h = np.zeros((batch, hidden))
    c = np.zeros((batch, hidden))

    history: List[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, Gates]] = []
    for t in range(steps):
        h_prev, c_prev = h, c
        h, c, gates = _step(inputs[:, t], h_prev, c_prev, cell)
        history.append((inputs[:, t], h_prev, c_prev, c, gates))

    predictions = cell.output(h)
    error = predictions - targets
    loss = float(np.mean(error ** 2))

    d_out = 2 * error / batch
    d_readout = h.T @ d_out
    d_readout_bias = float(d_out.sum())

    d_weights = np.zeros_like(cell.weights)
    d_bias = np.zeros_like(cell.bias)

    dh = np.outer(d_out, cell.readout)
    dc = np.zeros((batch, hidden))

    for x, h_prev, c_prev, c_next, gates in reversed(history):
        tanh_c = np.tanh(c_next)

        d_output = dh * tanh_c
        dc = dc + dh * gates.output * (1 - tanh_c ** 2)

        d_forget = dc * c_prev
        d_input = dc * gates.candidate
        d_candidate = dc * gates.input

        dz = np.concatenate([
            d_forget * gates.forget * (1 - gates.forget),
            d_input * gates.input * (1 - gates.input),
            d_output * gates.output * (1 - gates.output),
            d_candidate * (1 - gates.candidate ** 2),
        ], axis=1)

        concat = np.concatenate([x, h_prev], axis=1)
        d_weights += dz.T @ concat
        d_bias += dz.sum(axis=0)

        dh = (dz @ cell.weights)[:, cell.input_size:]
        dc = dc * gates.forget

    return loss, CellGradients(
        weights=d_weights, bias=d_bias, readout=d_readout, readout_bias=d_readout_bias
    )


@attrs.define(frozen=True, kw_only=True)
class TrainedModel:
    """A trained cell with what it was trained with.

    Attributes:
        cell: The trained parameters.
        config: The hyperparameters.
        losses: The loss before each epoch, followed by the final loss.
    """

    cell: LstmCell
    config: TrainConfig
    losses: Tuple[float, ...] = attrs.field(converter=tuple)

    @property
    def initial_loss(self) -> float:
        return self.losses[0]

    @property
    def final_loss(self) -> float:
        return self.losses[-1]

    def forecast(self, dataset: SeriesDataset, horizon: int) -> List[Tuple[int, float]]:
        return forecast(self.cell, dataset, horizon, window=self.config.window)


def fit(dataset: SeriesDataset, config: TrainConfig = TrainConfig()) -> TrainedModel:
    """Train a cell on the windows of a series with gradient descent.

    Parameters:
        dataset: The series, scaled by its bounds.
        config: The hyperparameters.

    Raises:
        InsufficientData: The series is not longer than the window.

    Returns:
        The trained cell with its loss history.
    """
    inputs, targets = dataset.windows(config.window)
    cell = LstmCell.initialize(inputs.shape[2], config.hidden_size, seed=config.seed)

    losses = []
    for epoch in range(config.epochs):
        loss, grads = loss_and_gradients(cell, inputs, targets)
        losses.append(loss)

        scale = config.learning_rate
        norm = grads.norm()
        if norm > config.clip_norm:
            scale *= config.clip_norm / norm

        cell = LstmCell(
            weights=cell.weights - scale * grads.weights,
            bias=cell.bias - scale * grads.bias,
            readout=cell.readout - scale * grads.readout,
            readout_bias=cell.readout_bias - scale * grads.readout_bias,
        )

        if epoch % LOG_INTERVAL == 0:
            _log.debug(f'Epoch {epoch}: training loss {loss!r}.')

    final, _ = loss_and_gradients(cell, inputs, targets)
    losses.append(final)

    _log.info(f'Trained for {config.epochs} epochs; loss {losses[0]!r} -> {final!r}.')
    return TrainedModel(cell=cell, config=config, losses=losses)


def train(dataset: SeriesDataset, config: TrainConfig = TrainConfig()) -> LstmCell:
    """Train a cell on a series, see `fit()`."""
    return fit(dataset, config).cell


def forecast(
    cell: LstmCell,
    dataset: SeriesDataset,
    horizon: int,
    *,
    window: int = TrainConfig().window
) -> List[Tuple[int, float]]:
    """Roll the cell forward past the end of the series.

    Each prediction is appended to the window the next one is made from.
    Years continue with the spacing of the last two points of the series.

    Parameters:
        cell: The trained parameters.
        dataset: The series the forecast continues.
        horizon: Number of periods to forecast.
        window: Number of points the cell was trained to read.

    Returns:
        The forecast `(year, value)` pairs in the units of the series.
    """
    if horizon < 0:
        raise ValueError(f'The horizon cannot be negative, got {horizon!r}')
    if horizon == 0:
        return []
    if len(dataset) < window:
        raise ValueError(f'The series has fewer than {window} points to forecast from')

    years = dataset.years
    step = years[-1] - years[-2] if len(years) > 1 else 1

    recent = list(dataset.scaled[-window:])
    points = []
    for n in range(1, horizon + 1):
        h = np.zeros(cell.hidden_size)
        c = np.zeros(cell.hidden_size)
        for value in recent[-window:]:
            h, c, _ = _step(np.array([value]), h, c, cell)

        predicted = float(cell.output(h))
        recent.append(predicted)
        points.append((years[-1] + n * step, float(dataset.denormalize(predicted))))

    return points
