import logging
import math
from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Union

import attrs
import numpy as np
from esv.models import (
    TOLERANCE, CrossRefError, FactorTree, GradeTable, GradeVector,
    InvalidWeights, ParseError, WeightVector
)
from typing_extensions import Self

from ._errors import DimensionMismatch, MissingObservation
from ._membership import CRISP, MembershipMode, membership

__all__ = (
    'ObservationSet',
    'RelationMatrix',
    'build_relation_matrix',
)


_log = logging.getLogger(__name__)


def _freeze(values: Mapping[str, Any]) -> 'MappingProxyType[str, float]':
    return MappingProxyType({str(name): float(value) for name, value in values.items()})


@attrs.define(frozen=True, kw_only=True)
class ObservationSet:
    """Observed values of the sub-factors for one period.

    Attributes:
        values: Mapping of sub-factor name to the observation in its unit.
        period: Label of the period observed, usually a year.
    """

    values: Mapping[str, float] = attrs.field(converter=_freeze)
    period: str = ''

    def __attrs_post_init__(self) -> None:
        for name, value in self.values.items():
            if not math.isfinite(value):
                raise ParseError(f'observations.values.{name}', 'value must be finite')

    def check(self, tree: FactorTree) -> None:
        """Check that every observed name is a sub-factor of the tree.

        Raises:
            CrossRefError: A name does not resolve against the tree.
        """
        for name in self.values:
            if name not in tree:
                raise CrossRefError('observations.values', name)

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        values = data.get('values')
        if not isinstance(values, Mapping):
            raise ParseError('observations.values', 'expected a mapping of sub-factor to value')

        for name, value in values.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(f'observations.values.{name}', 'expected a number')

        return cls(values=values, period=str(data.get('period', '')))

    def to_data(self) -> Dict[str, Any]:
        return {'period': self.period, 'values': dict(self.values)}


def _readonly(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.flags.writeable = False
    return array


@attrs.define(frozen=True, eq=False)
class RelationMatrix:
    """Membership of each factor in each grade, one row per factor.

    Every row is a grade vector, so the matrix is row-stochastic.

    Attributes:
        values: The `(factors, 5)` array of memberships.
    """

    values: np.ndarray = attrs.field(converter=_readonly)

    def __attrs_post_init__(self) -> None:
        if self.values.ndim != 2 or self.values.shape[1] != 5:
            raise DimensionMismatch(
                f'A relation matrix has five grade columns, got shape {self.values.shape}'
            )
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise InvalidWeights('Relation matrix entries must be finite and nonnegative')

        sums = self.values.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1) > TOLERANCE)
        if bad.size:
            raise InvalidWeights(
                f'Row {int(bad[0])} of the relation matrix sums to {float(sums[bad[0]])!r}'
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented

        return np.array_equal(self.values, other.values)

    @property
    def rows(self) -> List[GradeVector]:
        return [GradeVector(row) for row in self.values]

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence[float]],
        *,
        renormalize: bool = False
    ) -> Self:
        """Build a relation matrix from raw rows.

        Parameters:
            rows: One row of five memberships per factor.
            renormalize:
                Scale rows that do not sum to one, logging a warning for each,
                instead of rejecting them.
        """
        values = np.array(rows, dtype=float)
        if not renormalize:
            return cls(values)

        if values.ndim != 2:
            raise DimensionMismatch(f'Expected a matrix of rows, got shape {values.shape}')

        sums = values.sum(axis=1)
        for i, total in enumerate(sums):
            if abs(total - 1) > TOLERANCE:
                if total <= 0:
                    raise InvalidWeights(f'Row {i} of the relation matrix has no membership')

                _log.warning(
                    f'Row {i} of the relation matrix sums to {float(total)!r}; renormalizing.'
                )
                values[i] = values[i] / total

        return cls(values)


def _index_tables(
    tables: Union[Iterable[GradeTable], Mapping[str, GradeTable]]
) -> Mapping[str, GradeTable]:
    if isinstance(tables, Mapping):
        return tables
    return {table.sub_factor: table for table in tables}


def build_relation_matrix(
    observations: ObservationSet,
    tables: Union[Iterable[GradeTable], Mapping[str, GradeTable]],
    tree: FactorTree,
    sub_weights: Sequence[WeightVector],
    mode: MembershipMode = CRISP
) -> RelationMatrix:
    """Grade every sub-factor and aggregate the memberships per factor.

    Row `f` of the result is the convex combination of the memberships of the
    sub-factors of factor `f`, weighted by `sub_weights[f]`.

    Parameters:
        observations: The observed sub-factor values.
        tables: The grade tables, as a sequence or keyed by sub-factor.
        tree: The factor hierarchy.
        sub_weights: One weight vector per factor over its sub-factors.
        mode: The membership construction.

    Raises:
        MissingObservation: A sub-factor of the tree has no observation.
        DimensionMismatch: The sub-weights do not match the tree.
    """
    by_name = _index_tables(tables)

    if len(sub_weights) != len(tree.factors):
        raise DimensionMismatch(
            f'Expected sub-weights for {len(tree.factors)} factors, got {len(sub_weights)}'
        )

    rows: List[np.ndarray] = []
    for factor, weights in zip(tree.factors, sub_weights):
        if len(weights) != len(factor.sub_factors):
            raise DimensionMismatch(
                f'Factor {factor.name!r} has {len(factor.sub_factors)} sub-factors '
                f'but {len(weights)} sub-weights'
            )

        vectors = []
        for sub in factor.sub_factors:
            if sub.name not in observations.values:
                raise MissingObservation(sub.name)
            if sub.name not in by_name:
                raise CrossRefError('grade_tables', sub.name)

            vector = membership(observations.values[sub.name], by_name[sub.name], mode)
            vectors.append(vector.as_array())

        rows.append(weights.as_array() @ np.stack(vectors))

    return RelationMatrix(rows)
