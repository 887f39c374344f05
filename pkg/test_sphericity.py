"""Tests for central hulls, enclosing balls and the r(q) curve."""

import itertools
import math

import numpy as np
import pytest
from scipy.optimize import nnls

from backend.exceptions import DomainError, EmptyInputError
from backend.models import (
    Dataset,
    LpSymmetricModel,
    central_hull,
    smallest_enclosing_ball,
    sphericity_curve,
)

Q_GRID = np.round(np.arange(0.05, 0.951, 0.05), 12)


def candidate_balls(points: np.ndarray):
    """Circumscribed balls of every support subset of at most d + 1 points."""
    d = points.shape[1]
    for size in range(1, d + 2):
        for subset in itertools.combinations(points, size):
            base, edges = subset[0], np.array(subset[1:]) - subset[0]
            if size == 1:
                yield base, 0.0
                continue
            rhs = 0.5 * np.sum(edges * edges, axis=1)
            weights = np.linalg.lstsq(edges @ edges.T, rhs, rcond=None)[0]
            center = base + weights @ edges
            yield center, float(np.linalg.norm(subset[0] - center))


class TestCentralHull:
    def test_center_of_square(self):
        data = Dataset.from_points([[1, 1], [1, -1], [-1, 1], [-1, -1], [0, 0]])
        np.testing.assert_array_equal(central_hull(data, 0.2), [[0.0, 0.0]])

    def test_collinear_innermost(self):
        data = Dataset.from_points([[float(i), 0.0] for i in range(10)])
        hull = central_hull(data, 0.5)
        # depth ties go to the lower dataset index
        np.testing.assert_array_equal(hull[:, 0], [4.0, 5.0, 3.0, 6.0, 2.0])

    def test_high_level_keeps_everything(self):
        data = Dataset(np.random.default_rng(1).standard_normal((20, 2)))
        assert central_hull(data, 0.999).shape == (20, 2)

    @pytest.mark.parametrize("q", [0.0, 1.0, -0.2])
    def test_level_outside_unit_interval(self, q):
        with pytest.raises(DomainError):
            central_hull(Dataset.from_points([[0.0, 0.0]]), q)


class TestSmallestEnclosingBall:
    def test_two_points(self):
        center, radius = smallest_enclosing_ball([[0.0, 0.0], [2.0, 0.0]])
        np.testing.assert_allclose(center, [1.0, 0.0])
        assert radius == pytest.approx(1.0)

    def test_inner_third_point(self):
        center, radius = smallest_enclosing_ball([[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]])
        np.testing.assert_allclose(center, [1.0, 0.0], atol=1e-12)
        assert radius == pytest.approx(1.0)

    def test_singleton_and_duplicates(self):
        assert smallest_enclosing_ball([[3.0, 4.0]])[1] == 0.0
        assert smallest_enclosing_ball([[3.0, 4.0]] * 4)[1] == 0.0

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            smallest_enclosing_ball(np.empty((0, 2)))

    def test_minimal_against_support_enumeration(self):
        rng = np.random.default_rng(77)
        for _ in range(300):
            d = int(rng.integers(1, 4))
            points = rng.standard_normal((int(rng.integers(1, 11)), d))
            center, radius = smallest_enclosing_ball(points, seed=int(rng.integers(100)))
            assert np.all(np.linalg.norm(points - center, axis=1) <= radius + 1e-9)
            enclosing = [
                r
                for c, r in candidate_balls(points)
                if np.all(np.linalg.norm(points - c, axis=1) <= r + 1e-9)
            ]
            assert radius == pytest.approx(min(enclosing), rel=1e-9, abs=1e-9)


class TestSphericityCurve:
    def test_lower_bound_and_monotone(self):
        data = LpSymmetricModel(2.0, 2).sample(60, seed=4)
        curve = sphericity_curve(data, Q_GRID)
        floor = np.array([math.ceil(q * 60 - 1e-9) / 60 for q in Q_GRID])
        assert np.all(curve.r_values >= floor)
        assert np.all(np.diff(curve.r_values) >= 0.0)
        assert np.all(curve.r_values >= curve.r_raw)
        assert curve.area_deviation >= 0.0
        assert curve.area_cumulative[-1] == pytest.approx(curve.area_deviation)

    def test_points_on_circle(self):
        angles = np.linspace(0.0, 2.0 * math.pi, 24, endpoint=False)
        data = Dataset(np.column_stack([np.cos(angles), np.sin(angles)]))
        curve = sphericity_curve(data, Q_GRID)
        assert np.all(curve.r_values >= Q_GRID)

    def test_single_level_has_zero_area(self):
        data = Dataset(np.random.default_rng(2).standard_normal((15, 2)))
        curve = sphericity_curve(data, [0.5])
        assert curve.area_deviation == 0.0
        assert curve.r_values.shape == (1,)

    @pytest.mark.parametrize("grid", [[0.5, 0.4], [0.0, 0.5], [0.5, 1.0], [0.3, 0.3]])
    def test_invalid_grids(self, grid):
        data = Dataset(np.random.default_rng(2).standard_normal((15, 2)))
        with pytest.raises(DomainError):
            sphericity_curve(data, grid)

    def test_deterministic_with_approximate_depth(self):
        data = Dataset(np.random.default_rng(5).standard_normal((40, 3)))
        first = sphericity_curve(data, [0.25, 0.5, 0.75], method="approx", n_dirs=200, seed=3)
        second = sphericity_curve(data, [0.25, 0.5, 0.75], method="approx", n_dirs=200, seed=3)
        np.testing.assert_array_equal(first.r_values, second.r_values)


@pytest.mark.slow
def test_area_separates_small_p():
    wins, small_p, gaussian = 0, [], []
    for seed in range(20):
        areas = {
            p: sphericity_curve(LpSymmetricModel(p, 2).sample(500, seed), Q_GRID).area_deviation
            for p in (0.5, 1.0, 2.0, 5.0)
        }
        assert areas[2.0] <= 0.08
        small_p.append(areas[0.5])
        gaussian.append(areas[2.0])
        wins += areas[0.5] > max(areas[1.0], areas[2.0], areas[5.0])
    assert wins >= 18
    assert np.mean(small_p) >= 2.0 * np.mean(gaussian)


@pytest.mark.slow
def test_enclosing_ball_optimality_on_thousand_sets():
    # a ball is the smallest one iff its center is a convex combination of
    # the points on its boundary
    rng = np.random.default_rng(1000)
    for i in range(1000):
        d = int(rng.integers(1, 4))
        points = rng.standard_normal((int(rng.integers(1, 51)), d))
        center, radius = smallest_enclosing_ball(points, seed=i)
        distances = np.linalg.norm(points - center, axis=1)
        assert np.all(distances <= radius + 1e-9)
        support = points[distances >= radius - 1e-7 * (1.0 + radius)]
        system = np.vstack([support.T, np.ones(support.shape[0])])
        _, residual = nnls(system, np.append(center, 1.0))
        assert residual <= 1e-6
