import math
from typing import Any, Union

import attrs
import numpy as np
from esv.models import GradeTable, GradeVector, Orientation
from typing_extensions import Final

from ._errors import InvalidMembershipMode, NonFiniteObservation

__all__ = (
    'Crisp',
    'Trapezoidal',
    'MembershipMode',
    'CRISP',
    'membership',
)


@attrs.define(frozen=True)
class Crisp:
    """One-hot membership in the grade whose interval contains the value."""

    def to_data(self) -> Any:
        return 'crisp'


def _check_width(instance: 'Trapezoidal', attribute: Any, value: float) -> None:
    if not (math.isfinite(value) and 0 < value <= 1):
        raise InvalidMembershipMode(
            f'The trapezoidal width fraction must lie in (0, 1], got {value!r}'
        )


@attrs.define(frozen=True)
class Trapezoidal:
    """Linear crossfade between adjacent grades around each breakpoint.

    Around a breakpoint the membership moves linearly from the grade below to
    the grade above over a band of `width_fraction` times the narrower of the
    two adjacent finite intervals, centered on the breakpoint. Outside the
    bands the membership is crisp.

    Attributes:
        width_fraction: Width of the bands relative to the local interval.
    """

    width_fraction: float = attrs.field(converter=float, validator=_check_width)

    def to_data(self) -> Any:
        return {'trapezoidal': self.width_fraction}


MembershipMode = Union[Crisp, Trapezoidal]

CRISP: Final[Crisp] = Crisp()


def _numeric_membership(value: float, table: GradeTable, mode: MembershipMode) -> np.ndarray:
    """Membership over the five intervals in increasing numeric order."""
    memberships = np.zeros(5)
    position = table.position(value)
    memberships[position] = 1.0

    if isinstance(mode, Crisp):
        return memberships

    bounds = table.bounds
    # Widths of the three finite intervals; the extremes are unbounded
    widths = [high - low for low, high in zip(bounds, bounds[1:])]

    for k, bound in enumerate(bounds):
        neighbours = [widths[i] for i in (k - 1, k) if 0 <= i < len(widths)]
        half = mode.width_fraction * min(neighbours) / 2

        if abs(value - bound) < half:
            t = (value - bound + half) / (2 * half)

            memberships[:] = 0.0
            memberships[k] = 1 - t
            memberships[k + 1] = t
            break

    return memberships


def membership(value: float, table: GradeTable, mode: MembershipMode = CRISP) -> GradeVector:
    """Grade an observation against a grade table.

    Parameters:
        value: The observation, in the unit of the table's sub-factor.
        table: The grade division to grade against.
        mode: Crisp (the default) or trapezoidal membership.

    Raises:
        NonFiniteObservation: The value is infinite or NaN.

    Returns:
        The membership of the observation in each grade, Excellent first.
    """
    if not math.isfinite(value):
        raise NonFiniteObservation(f'Cannot grade a non-finite observation: {value!r}')

    numeric = _numeric_membership(value, table, mode)

    if table.orientation is Orientation.ascending:
        numeric = numeric[::-1]

    return GradeVector(numeric)
