from esv.models import ComputationError, InputError

__all__ = (
    'InvalidSeries',
    'InsufficientData',
    'DegenerateBounds',
    'ShapeMismatch',
)


class InvalidSeries(InputError):
    """Raised when a series is not ordered by strictly increasing years."""

    __slots__ = ()


class InsufficientData(InputError):
    """Raised when a series is too short to cut a single training window.

    Attributes:
        length: The number of points in the series.
        window: The window size asked for.
    """

    length: int
    window: int

    __slots__ = ('length', 'window')

    def __init__(self, length: int, window: int) -> None:
        self.length = length
        self.window = window

        super().__init__(
            f'A series of {length} points has no window of {window} with a target'
        )


class DegenerateBounds(ComputationError):
    """Raised when the normalization bounds of a series coincide.

    This is the case for a constant series without explicit bounds.
    """

    __slots__ = ()


class ShapeMismatch(InputError):
    """Raised when inputs or state do not fit the shapes of a cell."""

    __slots__ = ()
