import math

import numpy as np
import pytest

from app.core.config import Settings
from app.core.distance import (
    ShapeMismatchError,
    UndefinedCorrelationError,
    euclidean_distance,
    pearson_correlation,
)
from app.core.random import RandomSource, stable_key
from app.data.models import ImportanceMatrix, TimeSeriesInstance

from tests.helpers import instance


class TestEuclideanDistance:
    def test_identical_instances_are_at_zero(self, rng):
        values = rng.random((30, 8))
        assert euclidean_distance(instance("a", values), instance("b", values)) == 0.0

    def test_single_differing_cell(self):
        a = instance("a", [[0.0, 0.0], [0.0, 0.0]])
        b = instance("b", [[0.0, 0.0], [0.0, 0.5]])
        assert euclidean_distance(a, b) == pytest.approx(0.5)

    def test_three_four_five(self):
        a = instance("a", [[0.0, 0.0]])
        b = instance("b", [[0.3, 0.4]])
        assert euclidean_distance(a, b) == pytest.approx(0.5)

    def test_matches_cell_by_cell_sum(self, rng):
        a, b = rng.random((30, 8)), rng.random((30, 8))
        expected = math.sqrt(sum((a[t, s] - b[t, s]) ** 2 for t in range(30) for s in range(8)))
        assert euclidean_distance(a, b) == pytest.approx(expected, abs=1e-12)

    def test_metric_properties(self, rng):
        for _ in range(200):
            a, b, c = (rng.random((6, 3)) for _ in range(3))
            assert euclidean_distance(a, b) == pytest.approx(euclidean_distance(b, a))
            assert euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-12

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            euclidean_distance(np.zeros((3, 2)), np.zeros((2, 3)))


def _textbook_pearson(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sx = math.sqrt(sum((x - mx) ** 2 for x in xs))
    sy = math.sqrt(sum((y - my) ** 2 for y in ys))
    return cov / (sx * sy)


class TestPearsonCorrelation:
    def test_perfect_positive(self):
        assert pearson_correlation([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson_correlation([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_matches_textbook_formula(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 40))
            xs, ys = rng.random(n).tolist(), rng.random(n).tolist()
            r = pearson_correlation(xs, ys)
            assert -1.0 <= r <= 1.0
            assert r == pytest.approx(_textbook_pearson(xs, ys), abs=1e-9)

    def test_zero_variance_is_undefined(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson_correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pearson_correlation([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            pearson_correlation([1.0], [2.0])


class TestRandomSource:
    def test_same_seed_same_draws(self):
        a, b = RandomSource(42), RandomSource(42)
        assert [a.sample_indices(50, 5) for _ in range(10)] == [b.sample_indices(50, 5) for _ in range(10)]

    def test_child_is_stable_and_distinct(self):
        parent = RandomSource(42)
        first = parent.child("test-0001").sample_indices(1000, 10)
        second = RandomSource(42).child("test-0001").sample_indices(1000, 10)
        other = RandomSource(42).child("test-0002").sample_indices(1000, 10)
        assert first == second
        assert first != other

    def test_child_does_not_consume_parent_draws(self):
        a, b = RandomSource(9), RandomSource(9)
        a.child("x")
        assert a.sample_indices(100, 5) == b.sample_indices(100, 5)

    def test_sample_is_capped_by_population(self):
        picks = RandomSource(1).sample_indices(4, 10)
        assert sorted(picks) == [0, 1, 2, 3]

    def test_empty_sample(self):
        assert RandomSource(1).sample_indices(10, 0) == []
        assert RandomSource(1).sample_indices(0, 3) == []

    def test_stable_key_is_process_independent(self):
        assert stable_key("abc") == stable_key("abc")
        assert stable_key("abc") != stable_key("abd")

    def test_rejects_negative_seed(self):
        with pytest.raises(ValueError):
            RandomSource(-1)


class TestModels:
    def test_instance_values_are_read_only(self):
        x = instance("x", [[0.1, 0.2]])
        with pytest.raises(ValueError):
            x.values[0, 0] = 0.9

    def test_with_cells_leaves_the_original_untouched(self):
        x = instance("x", np.zeros((4, 2)))
        source = instance("n", np.ones((4, 2)))
        y = x.with_cells("y", source, (1,), 1, 2)
        assert x.values.sum() == 0.0
        np.testing.assert_array_equal(y.values[:, 1], [0.0, 1.0, 1.0, 0.0])
        np.testing.assert_array_equal(y.values[:, 0], np.zeros(4))

    def test_instance_rejects_empty(self):
        with pytest.raises(ValueError):
            TimeSeriesInstance("x", np.zeros((0, 2)))

    def test_importance_rejects_scores_above_one(self):
        with pytest.raises(ValueError):
            ImportanceMatrix(np.full((2, 2), 1.5))

    def test_importance_nonzero_steps(self):
        scores = np.zeros((5, 2))
        scores[1, 0] = 0.3
        scores[3, 1] = 0.2
        assert ImportanceMatrix(scores).nonzero_steps() == 2


def test_settings_defaults():
    settings = Settings(_env_file=None)
    assert settings.DEFAULT_SEED == 0
    assert settings.CENTROID_TEMPERATURE > 0
