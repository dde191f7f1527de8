import logging
import math
from typing import Any, Iterator, List, Sequence, Tuple, Union, overload

import attrs
import numpy as np
from typing_extensions import Self

from ._errors import (
    EmptyMatrix, InvalidWeights, NegativeEntry, NonFiniteEntry, RaggedRows
)
from ._tree import Grade
from ._utils import TOLERANCE

__all__ = (
    'EvaluationMatrix',
    'WeightVector',
    'GradeVector',
    'validate_matrix',
)


_log = logging.getLogger(__name__)


def _readonly(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.flags.writeable = False
    return array


@attrs.define(frozen=True, eq=False)
class EvaluationMatrix:
    """M states by N indicators of nonnegative scores.

    The underlying array is read-only so that instances can be shared freely.

    Attributes:
        values: The `(M, N)` array of scores.
    """

    values: np.ndarray = attrs.field(converter=_readonly)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented

        return np.array_equal(self.values, other.values)

    def __ne__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented

        return not np.array_equal(self.values, other.values)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def column(self, index: int) -> np.ndarray:
        return self.values[:, index]

    def to_data(self) -> List[List[float]]:
        return [[float(value) for value in row] for row in self.values]


def validate_matrix(raw: Union[Sequence[Sequence[float]], np.ndarray]) -> EvaluationMatrix:
    """Validate a rectangular array of scores into an `EvaluationMatrix`.

    Columns that are entirely zero are allowed but logged, as their entropy
    weight is undefined and it is up to the weighting step to reject them.

    Parameters:
        raw: A sequence of equally long rows, or a two-dimensional array.

    Raises:
        EmptyMatrix: There are no rows or no columns.
        RaggedRows: The rows differ in length.
        NonFiniteEntry: An entry is NaN or infinite.
        NegativeEntry: An entry is negative.

    Returns:
        The validated matrix.
    """
    if isinstance(raw, np.ndarray):
        if raw.ndim != 2:
            raise RaggedRows(0, 2, raw.ndim)
        rows: Sequence[Sequence[float]] = raw.tolist()
    else:
        rows = raw

    if len(rows) == 0 or len(rows[0]) == 0:
        raise EmptyMatrix('The evaluation matrix has no entries')

    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(i, width, len(row))

    values = np.array(rows, dtype=float)

    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        raise NonFiniteEntry(int(bad[0][0]), int(bad[0][1]))

    bad = np.argwhere(values < 0)
    if bad.size:
        raise NegativeEntry(int(bad[0][0]), int(bad[0][1]))

    for col in np.flatnonzero(~values.any(axis=0)):
        _log.warning(f'Column {col} of the evaluation matrix is entirely zero.')

    return EvaluationMatrix(values)


def _to_floats(value: Any) -> Tuple[float, ...]:
    return tuple(float(item) for item in value)


@attrs.define(frozen=True)
class WeightVector:
    """Nonnegative weights summing to one.

    Attributes:
        weights: The weights in indicator (or factor) order.
    """

    weights: Tuple[float, ...] = attrs.field(converter=_to_floats)

    def __attrs_post_init__(self) -> None:
        if not self.weights:
            raise InvalidWeights('A weight vector cannot be empty')
        if not all(math.isfinite(w) and w >= 0 for w in self.weights):
            raise InvalidWeights(f'Weights must be finite and nonnegative: {self.weights}')

        total = math.fsum(self.weights)
        if abs(total - 1) > TOLERANCE:
            raise InvalidWeights(f'Weights sum to {total!r}, not 1')

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self) -> Iterator[float]:
        return iter(self.weights)

    @overload
    def __getitem__(self, index: int) -> float:
        ...

    @overload
    def __getitem__(self, index: slice) -> Tuple[float, ...]:
        ...

    def __getitem__(self, index: Union[int, slice]) -> Union[float, Tuple[float, ...]]:
        return self.weights[index]

    def as_array(self) -> np.ndarray:
        return np.array(self.weights, dtype=float)

    @classmethod
    def normalized(cls, raw: Sequence[float]) -> Self:
        """Scale nonnegative raw weights so that they sum to one.

        Raises:
            InvalidWeights: A weight is negative, or all of them are zero.
        """
        values = np.asarray(raw, dtype=float)
        if values.size == 0 or not np.all(np.isfinite(values)) or np.any(values < 0):
            raise InvalidWeights(f'Cannot normalize weights {tuple(raw)}')

        total = values.sum()
        if total <= 0:
            raise InvalidWeights('Cannot normalize weights that are all zero')

        return cls(values / total)

    @classmethod
    def uniform(cls, size: int) -> Self:
        return cls([1 / size] * size)


@attrs.define(frozen=True)
class GradeVector:
    """Membership of a judgment in each of the five grades.

    Attributes:
        memberships: Memberships in grade order, Excellent first.
    """

    memberships: Tuple[float, float, float, float, float] = attrs.field(converter=_to_floats)

    def __attrs_post_init__(self) -> None:
        if len(self.memberships) != len(Grade):
            raise InvalidWeights(
                f'A grade vector has {len(Grade)} memberships, got {len(self.memberships)}'
            )
        if not all(math.isfinite(m) and m >= 0 for m in self.memberships):
            raise InvalidWeights(
                f'Memberships must be finite and nonnegative: {self.memberships}'
            )

        total = math.fsum(self.memberships)
        if abs(total - 1) > TOLERANCE:
            raise InvalidWeights(f'Memberships sum to {total!r}, not 1')

    def __iter__(self) -> Iterator[float]:
        return iter(self.memberships)

    def __getitem__(self, grade: Grade) -> float:
        return self.memberships[grade.value]

    def as_array(self) -> np.ndarray:
        return np.array(self.memberships, dtype=float)

    def best(self) -> Grade:
        """The grade with the largest membership, ties going to the better grade."""
        return Grade(int(np.argmax(self.as_array())))

    @classmethod
    def crisp(cls, grade: Grade) -> Self:
        memberships = [0.0] * len(Grade)
        memberships[grade.value] = 1.0
        return cls(memberships)
