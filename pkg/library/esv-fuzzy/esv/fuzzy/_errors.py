from esv.models import InputError

__all__ = (
    'MissingObservation',
    'DimensionMismatch',
    'InvalidCalibration',
    'InvalidScores',
    'InvalidMembershipMode',
    'NonFiniteObservation',
)


class MissingObservation(InputError):
    """Raised when a sub-factor has no observation to grade.

    Attributes:
        sub_factor: The name of the sub-factor without an observation.
    """

    sub_factor: str

    __slots__ = ('sub_factor',)

    def __init__(self, sub_factor: str) -> None:
        self.sub_factor = sub_factor

        super().__init__(f'No observation for sub-factor {sub_factor!r}')


class DimensionMismatch(InputError):
    """Raised when weights and a relation matrix cannot be multiplied."""

    __slots__ = ()


class InvalidCalibration(InputError):
    """Raised when a grade-to-money calibration is not a monotone map of [0, 1]."""

    __slots__ = ()


class InvalidScores(InputError):
    """Raised when grade scores are not strictly descending values in [0, 1]."""

    __slots__ = ()


class InvalidMembershipMode(InputError):
    """Raised when a trapezoidal width fraction lies outside (0, 1]."""

    __slots__ = ()


class NonFiniteObservation(InputError):
    """Raised when an observation to grade is infinite or NaN."""

    __slots__ = ()
