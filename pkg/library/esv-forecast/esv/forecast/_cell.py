from typing import Any, Dict, Mapping, NamedTuple, Tuple

import attrs
import numpy as np
from typing_extensions import Self

from ._errors import ShapeMismatch

__all__ = (
    'logistic',
    'LstmCell',
    'LstmState',
    'Gates',
    'lstm_step',
)


def logistic(x: np.ndarray) -> np.ndarray:
    """The logistic function `1 / (1 + exp(-x))`, without overflow."""
    return np.exp(-np.logaddexp(0.0, -x))


def _readonly(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.flags.writeable = False
    return array


@attrs.define(frozen=True, kw_only=True, eq=False)
class LstmCell:
    """Parameters of a single LSTM layer with a scalar readout.

    The gate parameters are stacked in the order forget, input, output,
    candidate, so that `weights[k*H:(k+1)*H]` belongs to gate `k`. Each gate
    sees the input concatenated with the previous hidden state.

    Attributes:
        weights: The `(4H, D + H)` gate weights.
        bias: The `(4H,)` gate biases.
        readout: The `(H,)` weights projecting the hidden state to the output.
        readout_bias: The bias of the output.
    """

    weights: np.ndarray = attrs.field(converter=_readonly)
    bias: np.ndarray = attrs.field(converter=_readonly)
    readout: np.ndarray = attrs.field(converter=_readonly)
    readout_bias: float = attrs.field(converter=float)

    def __attrs_post_init__(self) -> None:
        shape = self.weights.shape
        if self.weights.ndim != 2 or shape[0] % 4 or not shape[0]:
            raise ShapeMismatch(f'Gate weights of shape {shape} are not (4H, D + H)')

        hidden = self.hidden_size
        if shape[1] <= hidden:
            raise ShapeMismatch(f'Gate weights of shape {shape} have no input columns')
        if self.bias.shape != (4 * hidden,):
            raise ShapeMismatch(
                f'Expected gate biases of shape {(4 * hidden,)}, got {self.bias.shape}'
            )
        if self.readout.shape != (hidden,):
            raise ShapeMismatch(
                f'Expected readout of shape {(hidden,)}, got {self.readout.shape}'
            )

        arrays = (self.weights, self.bias, self.readout)
        if not (all(np.all(np.isfinite(a)) for a in arrays) and np.isfinite(self.readout_bias)):
            raise ValueError('LSTM parameters must be finite')

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented

        return (
            np.array_equal(self.weights, other.weights)
            and np.array_equal(self.bias, other.bias)
            and np.array_equal(self.readout, other.readout)
            and self.readout_bias == other.readout_bias
        )

    @property
    def hidden_size(self) -> int:
        return self.weights.shape[0] // 4

    @property
    def input_size(self) -> int:
        return self.weights.shape[1] - self.hidden_size

    @classmethod
    def initialize(
        cls,
        input_size: int,
        hidden_size: int,
        *,
        seed: int = 0,
        forget_bias: float = 1.0
    ) -> Self:
        """Draw a cell uniformly from `(-1/sqrt(H), 1/sqrt(H))`.

        The forget gate bias starts at `forget_bias` so that the cell state
        is kept by default early in training.
        """
        rng = np.random.default_rng(seed)
        scale = 1 / np.sqrt(hidden_size)

        bias = np.zeros(4 * hidden_size)
        bias[:hidden_size] = forget_bias

        return cls(
            weights=rng.uniform(-scale, scale, (4 * hidden_size, input_size + hidden_size)),
            bias=bias,
            readout=rng.uniform(-scale, scale, hidden_size),
            readout_bias=0.0,
        )

    @classmethod
    def zeros(cls, input_size: int, hidden_size: int) -> Self:
        return cls(
            weights=np.zeros((4 * hidden_size, input_size + hidden_size)),
            bias=np.zeros(4 * hidden_size),
            readout=np.zeros(hidden_size),
            readout_bias=0.0,
        )

    def output(self, h: np.ndarray) -> np.ndarray:
        """Project hidden states to the scalar output."""
        return h @ self.readout + self.readout_bias

    def to_data(self) -> Dict[str, Any]:
        return {
            'weights': self.weights.tolist(),
            'bias': self.bias.tolist(),
            'readout': self.readout.tolist(),
            'readout_bias': self.readout_bias,
        }

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        return cls(
            weights=data['weights'],
            bias=data['bias'],
            readout=data['readout'],
            readout_bias=data['readout_bias'],
        )


@attrs.define(frozen=True, eq=False)
class LstmState:
    """Hidden and cell state, either one vector each or a batch of rows.

    Attributes:
        h: The hidden state.
        c: The cell state.
    """

    h: np.ndarray = attrs.field(converter=_readonly)
    c: np.ndarray = attrs.field(converter=_readonly)

    @classmethod
    def zeros(cls, hidden_size: int, batch: Tuple[int, ...] = ()) -> Self:
        shape = (*batch, hidden_size)
        return cls(np.zeros(shape), np.zeros(shape))


class Gates(NamedTuple):
    """Activations of one step, kept for backpropagation."""

    forget: np.ndarray
    input: np.ndarray
    output: np.ndarray
    candidate: np.ndarray


def _step(
    x: np.ndarray,
    h: np.ndarray,
    c: np.ndarray,
    cell: LstmCell
) -> Tuple[np.ndarray, np.ndarray, Gates]:
    hidden = cell.hidden_size

    z = np.concatenate([x, h], axis=-1) @ cell.weights.T + cell.bias
    gates = Gates(
        forget=logistic(z[..., :hidden]),
        input=logistic(z[..., hidden:2 * hidden]),
        output=logistic(z[..., 2 * hidden:3 * hidden]),
        candidate=np.tanh(z[..., 3 * hidden:]),
    )

    c_next = gates.forget * c + gates.input * gates.candidate
    h_next = gates.output * np.tanh(c_next)
    return h_next, c_next, gates


def lstm_step(x: np.ndarray, state: LstmState, cell: LstmCell) -> LstmState:
    """Advance the state by one input.

    The forget, input and output gates are logistic, the candidate is a
    `tanh`, `c' = f * c + i * candidate` and `h' = o * tanh(c')`.

    Parameters:
        x: The input, of shape `(D,)` or `(B, D)` for a batch.
        state: The state before the input.
        cell: The parameters.

    Raises:
        ShapeMismatch: The input or state do not fit the cell.

    Returns:
        The state after the input.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (cell.input_size,):
        raise ShapeMismatch(f'Expected inputs of size {cell.input_size}, got shape {x.shape}')
    if state.h.shape != x.shape[:-1] + (cell.hidden_size,) or state.c.shape != state.h.shape:
        raise ShapeMismatch(
            f'State of shapes {state.h.shape} and {state.c.shape} does not fit inputs '
            f'{x.shape} and hidden size {cell.hidden_size}'
        )

    h, c, _ = _step(x, state.h, state.c, cell)
    return LstmState(h, c)
