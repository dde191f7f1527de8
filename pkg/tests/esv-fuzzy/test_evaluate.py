import logging

import numpy as np
import pytest
from esv.fuzzy import (
    DEFAULT_SCORES, Calibration, DimensionMismatch, FuzzyResult,
    InvalidCalibration, InvalidScores, MissingObservation, ObservationSet,
    RelationMatrix, build_relation_matrix, defuzzify, evaluate,
    fuzzy_evaluate, normalize_weights, rho_from_grade
)
from esv.models import (
    CrossRefError, Grade, GradeVector, InvalidWeights, Orientation, ParseError,
    WeightVector, build_default_factor_tree, build_default_grade_tables
)

CITY_L = {
    'Per capita GDP': 9.8,
    'Proportion of GDP in information industry': 31.5,
    'GDP share of tourism income': 12.4,
    'Annual GDP growth rate': 7.6,
    'Density of population': 1.35,
    'Natural population growth rate': 0.9,
    'Average length of education of the population': 11.2,
    'Proportion of ageing population': 6.3,
    'Comprehensive utilization ratio of industrial solid waste': 96.0,
    'Government environmental protection investment share of GDP': 3.4,
    'Comprehensive air pollution index': 3.8,
    'Treatment rate of urban domestic pollution': 72.0,
    'Road area per capita': 24.5,
    'Per capita green area': 14.2,
    'City per capita housing area': 27.8,
    'Per capita working area': 18.6,
    'Hydropower supply coverage': 98.7,
    'Traffic perfection degree': 89.0,
    'Network communication coverage': 99.2,
    'City green coverage': 52.0,
}

PUBLISHED_RELATION = [
    [0.7723, 0.5383, 0.5443, 0.032, 0.733],
    [0.0024, 0, 0.7742, 0.042, 0.134],
    [0.8932, 0.2234, 0.2574, 0.045, 0.356],
    [0.3334, 0.1595, 0.1241, 0.024, 0.251],
    [0.1672, 0.4325, 0.0004, 0.234, 0.001],
]
PUBLISHED_WEIGHTS = [0.452, 0.675, 0.986, 0.463, 0.523]

UNIFORM_SUB_WEIGHTS = [WeightVector.uniform(4)] * 5


class TestFuzzyAlgebra:
    def test_partition_of_unity(self) -> None:
        rng = np.random.default_rng(1000)

        for _ in range(1000):
            weights = WeightVector.normalized(rng.uniform(0, 1, size=5))
            relation = RelationMatrix(rng.dirichlet(np.ones(5), size=5))

            theta = fuzzy_evaluate(weights, relation)
            assert theta.as_array().sum() == pytest.approx(1, abs=1e-9)

    def test_unit_weight_selects_row(self) -> None:
        rng = np.random.default_rng(5)
        relation = RelationMatrix(rng.dirichlet(np.ones(5), size=5))

        for k in range(5):
            weights = WeightVector([1.0 if i == k else 0.0 for i in range(5)])
            assert list(fuzzy_evaluate(weights, relation)) == relation.values[k].tolist()

    def test_dimension_mismatch(self) -> None:
        relation = RelationMatrix(np.full((5, 5), 0.2))
        with pytest.raises(DimensionMismatch):
            fuzzy_evaluate(WeightVector.uniform(4), relation)


class TestPublishedExample:
    def test_weights_warn(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.WARNING):
            weights = normalize_weights(PUBLISHED_WEIGHTS)

        message = caplog.records[0].getMessage()
        assert message.startswith('Factor weights sum to')
        assert float(message.split()[4].rstrip(';')) == pytest.approx(3.099)
        assert sum(weights) == pytest.approx(1, abs=1e-9)
        assert weights[2] == pytest.approx(0.986 / 3.099)

    def test_relation_rows_rejected(self) -> None:
        with pytest.raises(InvalidWeights):
            RelationMatrix(PUBLISHED_RELATION)

    def test_relation_rows_warn(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.WARNING):
            relation = RelationMatrix.from_rows(PUBLISHED_RELATION, renormalize=True)

        assert caplog.text.count('renormalizing') == 5
        assert relation.values.sum(axis=1) == pytest.approx(np.ones(5), abs=1e-9)

    def test_normalized_weights_do_not_warn(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.WARNING):
            normalize_weights([0.2] * 5)

        assert caplog.text == ''


class TestDefuzzify:
    def test_crisp_grades(self) -> None:
        for grade, score in zip(Grade, DEFAULT_SCORES):
            assert defuzzify(GradeVector.crisp(grade)) == (pytest.approx(score), grade)

    def test_mixed(self) -> None:
        scalar, grade = defuzzify(GradeVector([0.5, 0.5, 0, 0, 0]))

        assert scalar == pytest.approx(0.8)
        assert grade is Grade.excellent

    @pytest.mark.parametrize('scores', [
        (0.9, 0.7, 0.5, 0.3),
        (0.9, 0.7, 0.7, 0.3, 0.1),
        (0.1, 0.3, 0.5, 0.7, 0.9),
        (1.5, 0.7, 0.5, 0.3, 0.1),
    ])
    def test_invalid_scores(self, scores) -> None:
        with pytest.raises(InvalidScores):
            defuzzify(GradeVector.crisp(Grade.top), scores)

    def test_grade_ignores_score_scale(self) -> None:
        rng = np.random.default_rng(22)

        for _ in range(1000):
            theta = GradeVector(rng.dirichlet(np.ones(5)))
            c = float(rng.uniform(0.05, 1.1))

            scalar, grade = defuzzify(theta)
            scaled, scaled_grade = defuzzify(theta, [c * s for s in DEFAULT_SCORES])

            assert scaled_grade is grade
            assert scaled == pytest.approx(c * scalar, abs=1e-12)


class TestCalibration:
    def test_interpolates(self) -> None:
        calibration = Calibration([(0, 0), (1, 0.8)])

        assert calibration(0.7) == pytest.approx(0.56)
        assert rho_from_grade(0.7, calibration) == pytest.approx(0.56)
        assert rho_from_grade(0.7, [(0, 0), (1, 0.8)]) == pytest.approx(0.56)

    def test_linear(self) -> None:
        assert Calibration.linear(0.8) == Calibration([(0, 0), (1, 0.8)])

    @pytest.mark.parametrize('points', [
        [(0, 0)],
        [(0, 0), (0, 1), (1, 2)],
        [(0, 1), (1, 0.5)],
        [(0.1, 0), (1, 1)],
        [(0, 0), (0.9, 1)],
        [(0, 0), (1, float('inf'))],
    ])
    def test_invalid(self, points) -> None:
        with pytest.raises(InvalidCalibration):
            Calibration(points)

    def test_out_of_range_grade(self) -> None:
        with pytest.raises(ValueError):
            rho_from_grade(1.2, Calibration.linear(1))

    def test_from_data(self) -> None:
        assert Calibration.from_data([[0, 0], [1, 2]]) == Calibration.linear(2)

        with pytest.raises(ParseError) as info:
            Calibration.from_data([[0, 0, 1]], 'urban.calibration')
        assert info.value.field == 'urban.calibration'


class TestRelationMatrix:
    def test_city_l_rows(self) -> None:
        relation = build_relation_matrix(
            ObservationSet(values=CITY_L),
            build_default_grade_tables(),
            build_default_factor_tree(),
            UNIFORM_SUB_WEIGHTS,
        )

        assert relation.values == pytest.approx(np.array([
            [0, 0.75, 0.25, 0, 0],
            [0.25, 0.5, 0.25, 0, 0],
            [0.25, 0.5, 0.25, 0, 0],
            [0, 1, 0, 0, 0],
            [0.25, 0.5, 0.25, 0, 0],
        ]))

    def test_sub_weights_mix_rows(self) -> None:
        values = dict(CITY_L)
        values['Per capita GDP'] = 20.0

        relation = build_relation_matrix(
            ObservationSet(values=values),
            build_default_grade_tables(),
            build_default_factor_tree(),
            [WeightVector([0.4, 0.2, 0.2, 0.2])] + [WeightVector.uniform(4)] * 4,
        )

        assert list(relation.rows[0]) == pytest.approx([0.4, 0.4, 0.2, 0, 0])

    def test_missing_observation(self) -> None:
        values = dict(CITY_L)
        del values['City green coverage']

        with pytest.raises(MissingObservation) as info:
            build_relation_matrix(
                ObservationSet(values=values),
                build_default_grade_tables(),
                build_default_factor_tree(),
                UNIFORM_SUB_WEIGHTS,
            )
        assert info.value.sub_factor == 'City green coverage'

    def test_sub_weight_count(self) -> None:
        with pytest.raises(DimensionMismatch):
            build_relation_matrix(
                ObservationSet(values=CITY_L),
                build_default_grade_tables(),
                build_default_factor_tree(),
                UNIFORM_SUB_WEIGHTS[:4],
            )


class TestObservationSet:
    def test_unknown_name(self) -> None:
        observations = ObservationSet(values={**CITY_L, 'Harbour depth': 12})

        with pytest.raises(CrossRefError) as info:
            observations.check(build_default_factor_tree())
        assert info.value.name == 'Harbour depth'

    def test_from_data(self) -> None:
        observations = ObservationSet.from_data({'period': 2019, 'values': CITY_L})

        assert observations.period == '2019'
        assert observations.values['Per capita GDP'] == 9.8
        assert observations.to_data() == {'period': '2019', 'values': CITY_L}

    def test_not_a_number(self) -> None:
        with pytest.raises(ParseError) as info:
            ObservationSet.from_data({'values': {'Per capita GDP': 'high'}})
        assert info.value.field == 'observations.values.Per capita GDP'

    def test_non_finite(self) -> None:
        with pytest.raises(ParseError):
            ObservationSet(values={'Per capita GDP': float('nan')})


def test_evaluate_city_l() -> None:
    result = evaluate(
        ObservationSet(values=CITY_L),
        build_default_grade_tables(),
        build_default_factor_tree(),
        UNIFORM_SUB_WEIGHTS,
        normalize_weights(PUBLISHED_WEIGHTS),
        calibration=Calibration([(0, 0), (1, 0.8)]),
    )

    total = sum(PUBLISHED_WEIGHTS)
    scalar = (0.9 * 0.546 + 0.7 * 1.894 + 0.5 * 0.659) / total

    assert list(result.theta_vector) == pytest.approx(
        [0.546 / total, 1.894 / total, 0.659 / total, 0, 0]
    )
    assert result.theta_scalar == pytest.approx(scalar)
    assert result.grade is Grade.top
    assert result.grade_label == 'Top'
    assert result.rho == pytest.approx(0.8 * scalar)


def test_result_round_trip() -> None:
    result = evaluate(
        ObservationSet(values=CITY_L),
        build_default_grade_tables(),
        build_default_factor_tree(),
        UNIFORM_SUB_WEIGHTS,
        WeightVector.uniform(5),
        calibration=Calibration.linear(1),
    )
    again = FuzzyResult.from_data(result.to_data())

    assert again == result
    assert again.relation == result.relation


def test_improving_an_observation_never_lowers_the_grade() -> None:
    rng = np.random.default_rng(21)
    tables = build_default_grade_tables()
    tree = build_default_factor_tree()

    def scalar(values, sub_weights, factor_weights) -> float:
        result = evaluate(
            ObservationSet(values=values), tables, tree, sub_weights, factor_weights,
            calibration=Calibration.linear(1),
        )
        return result.theta_scalar

    for _ in range(1000):
        values = {
            table.sub_factor: float(rng.uniform(table.bounds[0] - 1, table.bounds[-1] + 1))
            for table in tables
        }
        sub_weights = [WeightVector.normalized(rng.uniform(0.1, 1, size=4)) for _ in range(5)]
        factor_weights = WeightVector.normalized(rng.uniform(0.1, 1, size=5))

        table = tables[int(rng.integers(len(tables)))]
        step = float(rng.uniform(0, table.bounds[-1] - table.bounds[0]))
        if table.orientation is Orientation.descending:
            step = -step
        improved = {**values, table.sub_factor: values[table.sub_factor] + step}

        before = scalar(values, sub_weights, factor_weights)
        assert scalar(improved, sub_weights, factor_weights) >= before - 1e-12
