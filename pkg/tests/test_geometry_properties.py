"""Structural invariants of the distance operations."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normconc import (
    Ball,
    Box,
    CustomPsi,
    EuclideanPsi,
    MaxOfQuadraticsPsi,
    PointCloudHull,
    WeightedQuadraticPsi,
    cuboid_psi,
    empirical_mean_psi,
    normal_distance,
    talagrand_distance,
)
from conftest import grid_normal_distance, qp_projection_distance, random_body

EUCLID = EuclideanPsi()


def random_psi(rng, dim):
    roll = rng.integers(0, 3)
    if roll == 0:
        return EUCLID
    if roll == 1:
        A = rng.standard_normal((dim, dim))
        return WeightedQuadraticPsi(A @ A.T + 0.2 * np.eye(dim))
    mats = []
    for _ in range(2):
        A = rng.standard_normal((dim, dim))
        mats.append(A @ A.T + 0.2 * np.eye(dim))
    return MaxOfQuadraticsPsi(mats)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.1, max_value=10.0),
       st.lists(st.floats(min_value=-2, max_value=2), min_size=2, max_size=2))
def test_psi_degree_one_homogeneity(alpha, nu):
    nu = np.asarray(nu)
    for psi in (EUCLID, cuboid_psi([1.0, 2.0]), empirical_mean_psi([1.0, 0.5], [10, 20]),
                CustomPsi(lambda v: float(np.abs(v).sum()), name="l1")):
        assert psi(alpha * nu) == pytest.approx(alpha * psi(nu), rel=1e-12, abs=1e-12)


def test_normal_distance_degree_one_homogeneity(rng):
    # Scaling the point and the set scales the distance by the same factor.
    for _ in range(40):
        dim = int(rng.integers(2, 4))
        psi = random_psi(rng, dim)
        pts = rng.standard_normal((int(rng.integers(2, 8)), dim)) + 2.0
        x = rng.standard_normal(dim) * 2 - 2.0
        alpha = float(rng.uniform(0.2, 5.0))
        base = normal_distance(psi, x, pts).value
        scaled = normal_distance(psi, alpha * x, alpha * pts).value
        assert scaled == pytest.approx(alpha * base, rel=1e-6, abs=1e-6)


def test_talagrand_degree_zero_homogeneity(rng):
    # Scaling never changes which coordinates differ, so the distance is
    # reproduced exactly.
    for _ in range(25):
        dim = int(rng.integers(2, 4))
        pts = rng.integers(0, 3, size=(int(rng.integers(1, 5)), dim)).astype(float)
        x = rng.integers(0, 3, size=dim).astype(float)
        alpha = float(rng.uniform(0.1, 7.0))
        assert talagrand_distance(x, pts) == talagrand_distance(alpha * x, alpha * pts)


def test_hull_equivalence_across_representations(rng):
    # The same square as corner points, a box, and a facet intersection.
    square_pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    box = Box([0, 0], [1, 1])
    poly = box.to_hpolytope()
    for _ in range(20):
        x = rng.standard_normal(2) * 3
        vals = [normal_distance(EUCLID, x, body, use_closed_forms=False).value
                for body in (PointCloudHull(square_pts), box, poly)]
        assert max(vals) - min(vals) < 1e-7


def test_monotonicity_in_set_inclusion(rng):
    for _ in range(20):
        center = rng.standard_normal(2)
        small = Ball(center, 0.5)
        large = Ball(center, 1.5)
        x = center + rng.standard_normal(2) * 4
        d_small = normal_distance(EUCLID, x, small).value
        d_large = normal_distance(EUCLID, x, large).value
        assert d_large <= d_small + 1e-9
    nested_inner = Box([0, 0], [1, 1])
    nested_outer = Box([-1, -1], [2, 2])
    x = np.array([5.0, 5.0])
    assert (normal_distance(EUCLID, x, nested_outer).value
            <= normal_distance(EUCLID, x, nested_inner).value)


def test_zero_on_membership(rng):
    for _ in range(20):
        body = random_body(rng, 3)
        ref = body.reference_points()[0]
        assert normal_distance(EUCLID, ref, body).value == 0.0


def test_euclidean_matches_qp_oracle(rng):
    for _ in range(40):
        dim = int(rng.integers(2, 7))
        body = random_body(rng, dim)
        x = rng.standard_normal(dim) * 3
        oracle = qp_projection_distance(x, body)
        if oracle is None:
            continue
        res = normal_distance(EUCLID, x, body, use_closed_forms=False)
        assert res.value == pytest.approx(oracle, abs=1e-6)


def test_optimizer_matches_grid_oracle_low_dim(rng):
    # The finite grid only underestimates the supremum, so the optimizer
    # must dominate it and stay within the grid's resolution error.
    for _ in range(12):
        dim = int(rng.integers(2, 4))
        psi = random_psi(rng, dim)
        body = random_body(rng, dim, kind=rng.choice(["ball", "box", "hull"]))
        x = rng.standard_normal(dim) * 3
        n_points = 10**4 if dim == 2 else 16 * 10**4
        grid = grid_normal_distance(psi, x, body, n_points=n_points)
        res = normal_distance(psi, x, body, use_closed_forms=False)
        assert res.value >= grid - 1e-9
        tol = 1e-4 if dim == 2 else 5e-3
        assert res.value == pytest.approx(grid, rel=tol, abs=tol)


def test_weighted_quadratic_reduction_to_euclidean(rng):
    # psi from diag(d)^2 turns the distance into a Euclidean one after
    # rescaling coordinates by 1/d.
    for _ in range(15):
        dim = int(rng.integers(2, 4))
        d = rng.uniform(0.5, 2.0, dim)
        psi = WeightedQuadraticPsi(np.diag(d**2))
        pts = rng.standard_normal((6, dim)) + 2.5
        x = rng.standard_normal(dim) - 2.5
        lhs = normal_distance(psi, x, pts, use_closed_forms=False).value
        rhs = qp_projection_distance(x / d, PointCloudHull(pts / d))
        assert lhs == pytest.approx(rhs, abs=1e-6)

    for _ in range(10):
        d = rng.uniform(0.5, 2.0, 2)
        psi = WeightedQuadraticPsi(np.diag(d**2))
        lower = rng.standard_normal(2) + 2.0
        box = Box(lower, lower + rng.uniform(0.5, 1.5, 2))
        x = rng.standard_normal(2) - 2.0
        lhs = normal_distance(psi, x, box, use_closed_forms=False).value
        rhs = qp_projection_distance(x / d, Box(box.lower / d, box.upper / d))
        assert lhs == pytest.approx(rhs, abs=1e-6)


def test_custom_psi_sphere_search(rng):
    # 1-homogeneous non-quadratic psi: compare against the dense grid.
    psi = CustomPsi(lambda v: float(np.abs(v).sum()), dim=2, name="l1")
    for _ in range(5):
        body = Ball(rng.standard_normal(2) + 3.0, 0.5)
        x = np.zeros(2)
        grid = grid_normal_distance(psi, x, body, n_points=10**4)
        res = normal_distance(psi, x, body)
        assert res.value == pytest.approx(grid, rel=5e-3, abs=5e-3)


def test_degenerate_psi_detected_across_bodies(rng):
    psi = WeightedQuadraticPsi(np.diag([1.0, 0.0]))
    for body in (Ball([0.0, 0.0], 1.0), Box([-1, -1], [1, 1]),
                 PointCloudHull([[0.0, 1.0], [1.0, 0.0], [-1.0, 0.0]]),
                 Box([-1, -1], [1, 1]).to_hpolytope()):
        res = normal_distance(psi, [0.0, 5.0], body)
        assert res.degenerate and math.isinf(res.value)
        # Along the nondegenerate axis the distance stays finite.
        res2 = normal_distance(psi, [5.0, 0.0], body)
        assert not res2.degenerate and res2.value == pytest.approx(4.0, abs=1e-6)
