from esv.models import ComputationError, InputError

__all__ = (
    'NotNormalized',
    'AllZeroColumn',
    'SingleRow',
    'AllMaxEntropy',
    'ZeroOverlap',
    'LengthMismatch',
)


class NotNormalized(InputError):
    """Raised when a probability vector does not sum to one.

    Attributes:
        total: The sum of the vector.
    """

    total: float

    __slots__ = ('total',)

    def __init__(self, total: float) -> None:
        self.total = total

        super().__init__(f'Probabilities sum to {total!r}, not 1')


class LengthMismatch(InputError):
    """Raised when two vectors that are combined differ in length."""

    __slots__ = ()


class AllZeroColumn(ComputationError):
    """Raised when a column has no positive score, making its shares undefined.

    Attributes:
        col: The zero-based index of the column.
    """

    col: int

    __slots__ = ('col',)

    def __init__(self, col: int) -> None:
        self.col = col

        super().__init__(f'Column {col} has no positive entry')


class SingleRow(ComputationError):
    """Raised when index entropies are requested for a single state.

    The normalizing constant 1/ln(M) is singular at M = 1.
    """

    __slots__ = ()


class AllMaxEntropy(ComputationError):
    """Raised when every indicator has maximal entropy.

    No indicator discriminates between the states so the entropy weights are
    undefined. Pass `uniform_fallback=True` to opt into uniform weights.
    """

    __slots__ = ()


class ZeroOverlap(ComputationError):
    """Raised when a prior puts all of its mass on indicators without weight."""

    __slots__ = ()
