import logging
import math
from typing import (
    Any, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union
)

import attrs
import numpy as np
from esv.models import (
    TOLERANCE, FactorTree, Grade, GradeTable, GradeVector, ParseError,
    WeightVector
)
from typing_extensions import Final, Self

from ._errors import DimensionMismatch, InvalidCalibration, InvalidScores
from ._membership import CRISP, MembershipMode
from ._relation import ObservationSet, RelationMatrix, build_relation_matrix

__all__ = (
    'DEFAULT_SCORES',
    'Calibration',
    'FuzzyResult',
    'normalize_weights',
    'fuzzy_evaluate',
    'defuzzify',
    'rho_from_grade',
    'evaluate',
)


_log = logging.getLogger(__name__)

# Score of each grade, Excellent first, used to reduce a grade vector.
DEFAULT_SCORES: Final[Tuple[float, ...]] = (0.9, 0.7, 0.5, 0.3, 0.1)


def normalize_weights(raw: Sequence[float]) -> WeightVector:
    """Turn explicitly supplied factor weights into a `WeightVector`.

    Weights that do not sum to one are scaled so that they do, with a warning
    since the caller most likely transcribed them from somewhere that did not
    normalize.

    Raises:
        InvalidWeights: A weight is negative, or all of them are zero.
    """
    total = math.fsum(float(w) for w in raw)
    if abs(total - 1) > TOLERANCE:
        _log.warning(f'Factor weights sum to {total!r}; renormalizing.')

    return WeightVector.normalized(raw)


def fuzzy_evaluate(weights: WeightVector, relation: RelationMatrix) -> GradeVector:
    """Compose factor weights with the relation matrix, `theta = W . R`.

    Parameters:
        weights: One weight per factor.
        relation: The relation matrix, one row per factor.

    Raises:
        DimensionMismatch: The number of weights and rows differ.

    Returns:
        The membership of the evaluated city in each grade.
    """
    if len(weights) != relation.values.shape[0]:
        raise DimensionMismatch(
            f'{len(weights)} factor weights cannot weigh '
            f'{relation.values.shape[0]} relation rows'
        )

    return GradeVector(weights.as_array() @ relation.values)


def _check_scores(scores: Sequence[float]) -> np.ndarray:
    values = np.asarray(scores, dtype=float)
    if values.shape != (len(Grade),):
        raise InvalidScores(f'Expected {len(Grade)} grade scores, got {len(values)}')
    if not np.all(np.isfinite(values)) or np.any((values < 0) | (values > 1)):
        raise InvalidScores(f'Grade scores must lie in [0, 1]: {tuple(scores)}')
    if np.any(np.diff(values) >= 0):
        raise InvalidScores(f'Grade scores must be strictly descending: {tuple(scores)}')

    return values


def defuzzify(
    theta: GradeVector,
    scores: Sequence[float] = DEFAULT_SCORES
) -> Tuple[float, Grade]:
    """Reduce a grade vector to a scalar and a grade.

    Parameters:
        theta: The evaluated grade vector.
        scores: One score per grade, strictly descending within [0, 1].

    Raises:
        InvalidScores: The scores are not strictly descending within [0, 1].

    Returns:
        The score-weighted scalar and the grade with the largest membership,
        ties going to the better grade.
    """
    values = _check_scores(scores)

    scalar = float(np.clip(theta.as_array() @ values, 0.0, 1.0))
    return scalar, theta.best()


def _to_points(value: Any) -> Tuple[Tuple[float, float], ...]:
    return tuple((float(x), float(y)) for x, y in value)


@attrs.define(frozen=True)
class Calibration:
    """Monotone piecewise-linear map from a grade scalar to money.

    The map interpolates linearly between the points and must cover the
    whole of [0, 1].

    Attributes:
        points: `(theta, rho)` pairs with strictly increasing `theta` and
            nondecreasing `rho` in $/m²·a.
    """

    points: Tuple[Tuple[float, float], ...] = attrs.field(converter=_to_points)

    def __attrs_post_init__(self) -> None:
        if len(self.points) < 2:
            raise InvalidCalibration('A calibration needs at least two points')

        xs, ys = zip(*self.points)
        if not all(math.isfinite(v) for v in xs + ys):
            raise InvalidCalibration(f'Calibration points must be finite: {self.points}')
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise InvalidCalibration(
                f'Calibration grade values must be strictly increasing: {xs}'
            )
        if any(b < a for a, b in zip(ys, ys[1:])):
            raise InvalidCalibration(f'Calibration must not decrease: {ys}')
        if xs[0] > 0 or xs[-1] < 1:
            raise InvalidCalibration(
                f'Calibration covers [{xs[0]!r}, {xs[-1]!r}], not all of [0, 1]'
            )

    def __call__(self, theta: float) -> float:
        xs, ys = zip(*self.points)
        return float(np.interp(theta, xs, ys))

    @classmethod
    def linear(cls, top: float) -> Self:
        """The straight line from `0 -> 0` to `1 -> top`."""
        return cls([(0.0, 0.0), (1.0, top)])

    @classmethod
    def from_data(cls, data: Any, field: str = 'calibration') -> Self:
        try:
            return cls([(x, y) for x, y in data])
        except (TypeError, ValueError):
            raise ParseError(field, 'expected a list of [theta, value] pairs') from None

    def to_data(self) -> Any:
        return [list(point) for point in self.points]


def rho_from_grade(
    theta_scalar: float,
    calibration: Union[Calibration, Iterable[Tuple[float, float]]]
) -> float:
    """Monetary value per unit area of a defuzzified grade.

    Parameters:
        theta_scalar: The defuzzified grade, in [0, 1].
        calibration: The calibration, or its points.

    Raises:
        InvalidCalibration: The points do not form a monotone map of [0, 1].

    Returns:
        The grade's value `rho` in $/m²·a.
    """
    if not isinstance(calibration, Calibration):
        calibration = Calibration(calibration)

    if not 0 <= theta_scalar <= 1:
        raise ValueError(f'A defuzzified grade lies in [0, 1], got {theta_scalar!r}')

    return calibration(theta_scalar)


@attrs.define(frozen=True, kw_only=True)
class FuzzyResult:
    """Outcome of the fuzzy comprehensive evaluation.

    Attributes:
        theta_vector: The evaluated grade vector.
        theta_scalar: The defuzzified grade in [0, 1].
        grade: The grade with the largest membership.
        rho: Value of the grade in $/m²·a.
        relation: The relation matrix the evaluation composed, if kept.
    """

    theta_vector: GradeVector
    theta_scalar: float
    grade: Grade
    rho: float
    relation: Optional[RelationMatrix] = attrs.field(default=None, eq=False)

    @property
    def grade_label(self) -> str:
        return self.grade.label

    def to_data(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'theta_vector': list(self.theta_vector),
            'theta_scalar': self.theta_scalar,
            'grade': self.grade.name,
            'rho': self.rho,
        }
        if self.relation is not None:
            data['relation'] = self.relation.values.tolist()
        return data

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        relation = data.get('relation')
        return cls(
            theta_vector=GradeVector(data['theta_vector']),
            theta_scalar=float(data['theta_scalar']),
            grade=Grade[data['grade']],
            rho=float(data['rho']),
            relation=RelationMatrix(relation) if relation is not None else None,
        )


def evaluate(
    observations: ObservationSet,
    tables: Union[Iterable[GradeTable], Mapping[str, GradeTable]],
    tree: FactorTree,
    sub_weights: Sequence[WeightVector],
    factor_weights: WeightVector,
    *,
    calibration: Union[Calibration, Iterable[Tuple[float, float]]],
    mode: MembershipMode = CRISP,
    scores: Sequence[float] = DEFAULT_SCORES
) -> FuzzyResult:
    """Run the fuzzy evaluation from observations to the grade's value.

    Parameters:
        observations: The observed sub-factor values.
        tables: The grade tables.
        tree: The factor hierarchy.
        sub_weights: One weight vector per factor over its sub-factors.
        factor_weights: The weights of the five factors.
        calibration: The map from the defuzzified grade to money.
        mode: The membership construction.
        scores: The grade scores used to defuzzify.

    Returns:
        The evaluation with the relation matrix it was composed from.
    """
    relation = build_relation_matrix(observations, tables, tree, sub_weights, mode)
    theta = fuzzy_evaluate(factor_weights, relation)
    scalar, grade = defuzzify(theta, scores)
    rho = rho_from_grade(scalar, calibration)

    _log.debug(f'Evaluated grade {grade.label} ({scalar!r}) worth {rho!r} per unit area.')
    return FuzzyResult(
        theta_vector=theta, theta_scalar=scalar, grade=grade, rho=rho, relation=relation
    )
