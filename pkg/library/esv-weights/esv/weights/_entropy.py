import logging
import math
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import attrs
import numpy as np
from esv.models import EvaluationMatrix, FactorTree, InvalidWeights, WeightVector
from typing_extensions import Final, Self

from ._errors import (
    AllMaxEntropy, AllZeroColumn, LengthMismatch, NotNormalized, SingleRow,
    ZeroOverlap
)

__all__ = (
    'EntropyReport',
    'system_entropy',
    'column_shares',
    'index_entropies',
    'entropy_weights',
    'combine_with_prior',
    'entropy_report',
    'group_by_factor',
)


_log = logging.getLogger(__name__)

# Tolerance before a probability vector is rejected as not normalized.
NORMALIZATION_SLACK: Final[float] = 1e-6


def _plogp(p: np.ndarray) -> np.ndarray:
    # 0 * ln(0) is taken to be 0
    safe = np.where(p > 0, p, 1.0)
    return np.where(p > 0, p * np.log(safe), 0.0)


def system_entropy(probs: Sequence[float]) -> float:
    """Shannon entropy `-sum(p ln p)` of a probability distribution.

    Parameters:
        probs: Nonnegative probabilities summing to one.

    Raises:
        NotNormalized: The probabilities deviate from one by more than 1e-6.

    Returns:
        The entropy in nats, never negative.
    """
    p = np.asarray(probs, dtype=float)
    if np.any(p < 0):
        raise InvalidWeights(f'Probabilities must be nonnegative: {tuple(probs)}')

    total = float(p.sum())
    if abs(total - 1) > NORMALIZATION_SLACK:
        raise NotNormalized(total)

    return max(0.0, float(-_plogp(p).sum()))


def column_shares(matrix: EvaluationMatrix) -> EvaluationMatrix:
    """Divide every score by its column total, giving `p_ik`.

    Raises:
        AllZeroColumn: A column has no positive entry.

    Returns:
        A column-stochastic matrix of the same shape.
    """
    totals = matrix.values.sum(axis=0)

    zero = np.flatnonzero(totals <= 0)
    if zero.size:
        raise AllZeroColumn(int(zero[0]))

    return EvaluationMatrix(matrix.values / totals)


def index_entropies(shares: EvaluationMatrix, rows: Optional[int] = None) -> Tuple[float, ...]:
    """Entropy `s_k` of each indicator column, scaled by `1 / ln M` into [0, 1].

    Parameters:
        shares: A column-stochastic matrix, as returned by `column_shares()`.
        rows: The number of states M; defaults to the row count of `shares`.

    Raises:
        SingleRow: There is only one state.

    Returns:
        One entropy per indicator column.
    """
    m = shares.rows if rows is None else rows
    if m < 2:
        raise SingleRow('Index entropies need at least two states')

    g = 1 / math.log(m)
    entropies = -g * _plogp(shares.values).sum(axis=0)
    if m == shares.rows:
        # a uniform column has exactly maximal entropy
        entropies[np.ptp(shares.values, axis=0) == 0] = 1.0

    return tuple(float(s) for s in np.clip(entropies, 0.0, 1.0))


def entropy_weights(
    entropies: Sequence[float],
    *,
    uniform_fallback: bool = False
) -> WeightVector:
    """Entropy weights `w_k = (1 - s_k) / sum(1 - s_k)`.

    Parameters:
        entropies: The index entropies, each in [0, 1].
        uniform_fallback:
            Return uniform weights instead of raising when every entropy is
            maximal. A warning is logged when the fallback is used.

    Raises:
        AllMaxEntropy: Every entropy is 1 and `uniform_fallback` is off.

    Returns:
        The normalized entropy weights.
    """
    s = np.asarray(entropies, dtype=float)
    if s.size == 0 or np.any((s < 0) | (s > 1)):
        raise InvalidWeights(f'Entropies must lie in [0, 1]: {tuple(entropies)}')

    utility = 1 - s

    total = utility.sum()
    if total <= 0:
        if not uniform_fallback:
            raise AllMaxEntropy('Every indicator has maximal entropy')

        _log.warning('Every indicator has maximal entropy; falling back to uniform weights.')
        return WeightVector.uniform(s.size)

    return WeightVector(utility / total)


def combine_with_prior(
    weights: WeightVector,
    prior: Union[WeightVector, Sequence[float]]
) -> WeightVector:
    """Combine entropy weights with prior weights `gamma_k` of an evaluator.

    The combined weight is `gamma_k * w_k / sum(gamma_k * w_k)`, summed over
    the indicators.

    Parameters:
        weights: The entropy weights.
        prior: Nonnegative prior weights, not necessarily normalized.

    Raises:
        ZeroOverlap: The prior only weighs indicators with zero entropy weight.

    Returns:
        The comprehensive weights.
    """
    gamma = np.asarray(list(prior), dtype=float)
    if gamma.shape != (len(weights),):
        raise LengthMismatch(
            f'The prior has {gamma.size} entries but there are {len(weights)} weights'
        )
    if not np.all(np.isfinite(gamma)) or np.any(gamma < 0) or not gamma.any():
        raise InvalidWeights(
            f'A prior must be nonnegative and not all zero: {tuple(gamma.tolist())}'
        )

    product = gamma * weights.as_array()
    total = product.sum()
    if total <= 0:
        raise ZeroOverlap('The prior and the entropy weights do not overlap')

    return WeightVector(product / total)


@attrs.define(frozen=True, kw_only=True, eq=False)
class EntropyReport:
    """Every intermediate of the entropy weight method.

    Attributes:
        shares: The column-stochastic matrix `p_ik`.
        entropies: The index entropies `s_k`.
        weights: The entropy weights `w_k`.
        combined: The weights combined with a prior, if one was supplied.
    """

    shares: EvaluationMatrix
    entropies: Tuple[float, ...]
    weights: WeightVector
    combined: Optional[WeightVector] = None

    @property
    def effective(self) -> WeightVector:
        """The weights downstream evaluation should use."""
        return self.combined if self.combined is not None else self.weights

    def to_data(self) -> Dict[str, Any]:
        return {
            'shares': self.shares.to_data(),
            'entropies': list(self.entropies),
            'weights': list(self.weights),
            'combined': list(self.combined) if self.combined is not None else None,
        }

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        combined = data.get('combined')
        return cls(
            shares=EvaluationMatrix(data['shares']),
            entropies=tuple(float(s) for s in data['entropies']),
            weights=WeightVector(data['weights']),
            combined=WeightVector(combined) if combined is not None else None,
        )


def entropy_report(
    matrix: EvaluationMatrix,
    prior: Union[WeightVector, Sequence[float], None] = None,
    *,
    uniform_fallback: bool = False
) -> EntropyReport:
    """Run the entropy weight method from an evaluation matrix to weights.

    Parameters:
        matrix: The validated evaluation matrix.
        prior: Optional prior weights of an evaluator to combine with.
        uniform_fallback: See `entropy_weights()`.

    Returns:
        A report with every intermediate.
    """
    shares = column_shares(matrix)
    entropies = index_entropies(shares)
    weights = entropy_weights(entropies, uniform_fallback=uniform_fallback)

    combined = combine_with_prior(weights, prior) if prior is not None else None

    _log.debug(f'Entropy weights of {matrix.cols} indicators over {matrix.rows} states.')
    return EntropyReport(
        shares=shares, entropies=entropies, weights=weights, combined=combined
    )


def group_by_factor(
    weights: WeightVector,
    tree: FactorTree
) -> Tuple[WeightVector, List[WeightVector]]:
    """Split indicator weights along the factor hierarchy.

    The weight of a factor is the sum of the weights of its sub-factors, and
    the sub-weights of a factor are its sub-factors' weights renormalized
    within the factor. A factor without any weight gets uniform sub-weights;
    its factor weight of zero makes them irrelevant.

    Parameters:
        weights: One weight per sub-factor, in the tree's column order.
        tree: The factor hierarchy.

    Returns:
        The factor weights and one sub-weight vector per factor.
    """
    leaves = len(tree.leaves())
    if len(weights) != leaves:
        raise LengthMismatch(f'Expected {leaves} indicator weights, got {len(weights)}')

    blocks = weights.as_array().reshape(len(tree.factors), -1)
    totals = blocks.sum(axis=1)

    sub_weights = []
    for factor, block, total in zip(tree.factors, blocks, totals):
        if total > 0:
            sub_weights.append(WeightVector(block / total))
        else:
            _log.debug(f'Factor {factor.name!r} carries no weight; using uniform sub-weights.')
            sub_weights.append(WeightVector.uniform(block.size))

    factor_weights = totals / totals.sum()

    return WeightVector(factor_weights), sub_weights
