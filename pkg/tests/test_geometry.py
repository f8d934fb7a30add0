"""Geometry operations: membership, support functions, distances, cones."""

import math

import numpy as np
import pytest

from normconc import (
    Ball,
    Box,
    DimensionMismatchError,
    EmptyBodyError,
    EuclideanPsi,
    GeometryError,
    HalfSpace,
    HPolytope,
    PointCloudHull,
    SmoothSublevel,
    cuboid_psi,
    distance_to_halfspace,
    halfspace_contains,
    hausdorff_distance,
    normal_cone_at,
    normal_distance,
    normal_distance_set_to_set,
    support_function,
    talagrand_distance,
    weighted_hamming,
)
from conftest import qp_projection_distance

EUCLID = EuclideanPsi()


class TestHalfspaceContains:
    def test_strictly_inside(self):
        assert halfspace_contains(HalfSpace(point=[0.0], normal=[1.0]), [-1.0])

    def test_degenerate_normal_contains_everything(self):
        assert halfspace_contains(HalfSpace(point=[0.0], normal=[0.0]), [1e9])

    def test_outside(self):
        assert not halfspace_contains(HalfSpace(point=[0, 0], normal=[1, 0]), [0.5, 0])

    def test_boundary_is_inside(self):
        assert halfspace_contains(HalfSpace(point=[1.0, 2.0], normal=[3.0, -1.0]),
                                  [1.0, 2.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            halfspace_contains(HalfSpace(point=[0.0], normal=[1.0]), [0.0, 0.0])


class TestSupportFunction:
    def test_ball(self):
        assert support_function(Ball([0, 0], 2.0), [1, 0]) == pytest.approx(2.0)

    def test_box_mixed_signs(self):
        assert support_function(Box([0, 0], [1, 1]), [1, -1]) == pytest.approx(1.0)

    def test_hull_max_over_points(self):
        assert support_function(PointCloudHull([[1, 0], [0, 1]]), [1, 1]) == pytest.approx(1.0)

    def test_unbounded_polytope_direction(self):
        quadrant = HPolytope([HalfSpace(point=[0, 0], normal=[-1, 0]),
                              HalfSpace(point=[0, 0], normal=[0, -1])])
        assert support_function(quadrant, [1.0, 0.0]) == math.inf
        assert support_function(quadrant, [-1.0, -1.0]) == pytest.approx(0.0)

    def test_infeasible_polytope_raises(self):
        empty = HPolytope([HalfSpace(point=[0.0], normal=[1.0]),
                           HalfSpace(point=[1.0], normal=[-1.0])])
        with pytest.raises(EmptyBodyError):
            empty.support([1.0])

    def test_sublevel_matches_ball(self):
        body = SmoothSublevel(lambda x: float(x @ x), lambda x: 2 * np.asarray(x),
                              4.0, interior_point=np.zeros(2))
        nu = np.array([0.6, -0.8])
        assert body.support(nu) == pytest.approx(2.0, abs=1e-6)


class TestDistanceToHalfspace:
    def test_unit_offset(self):
        H = HalfSpace(point=[-1, 0], normal=[1, 0])
        assert distance_to_halfspace(EUCLID, [0, 0], H) == pytest.approx(1.0)

    def test_inside_gives_zero(self):
        H = HalfSpace(point=[-1, 0], normal=[1, 0])
        assert distance_to_halfspace(EUCLID, [-2, 0], H) == 0.0

    def test_cuboid_psi_with_length_two_reduces_to_euclidean(self):
        # psi(nu) = (1/2) sqrt(4 nu1^2 + 4 nu2^2) = ||nu||.
        psi = cuboid_psi([2.0, 2.0])
        H = HalfSpace(point=[-1, 0], normal=[1, 0])
        assert distance_to_halfspace(psi, [0, 0], H) == pytest.approx(
            distance_to_halfspace(EUCLID, [0, 0], H))

    def test_degenerate_normal_is_zero(self):
        H = HalfSpace(point=[0.0, 0.0], normal=[0.0, 0.0])
        assert distance_to_halfspace(EUCLID, [5.0, 5.0], H) == 0.0

    def test_vanishing_psi_with_positive_separation(self):
        psi = cuboid_psi([0.0, 1.0])
        H = HalfSpace(point=[-1, 0], normal=[1, 0])
        assert distance_to_halfspace(psi, [0, 0], H) == math.inf

    def test_scaling_invariance_of_representation(self):
        H1 = HalfSpace(point=[-1, 0], normal=[1, 0])
        H2 = HalfSpace(point=[-1, 5], normal=[7, 0])
        d1 = distance_to_halfspace(EUCLID, [2, 3], H1)
        d2 = distance_to_halfspace(EUCLID, [2, 3], H2)
        assert d1 == pytest.approx(d2)


class TestNormalDistance:
    def test_ball_matches_projection(self):
        res = normal_distance(EUCLID, [0, 0], Ball([3, 0], 2.0))
        assert res.value == pytest.approx(1.0, abs=1e-9)
        assert res.witness_normal is not None

    def test_interior_point_gives_zero(self):
        res = normal_distance(EUCLID, [0.25, 0.25], Box([0, 0], [1, 1]))
        assert res.value == 0.0

    def test_two_point_hull(self):
        # Projection of the origin onto the segment between (1,0) and (0,1);
        # brute-force quadratic minimization over the segment parameter.
        t = np.linspace(0.0, 1.0, 100001)
        seg = np.stack([1.0 - t, t], axis=1)
        oracle = float(np.min(np.linalg.norm(seg, axis=1)))
        res = normal_distance(EUCLID, [0, 0], PointCloudHull([[1, 0], [0, 1]]))
        assert oracle == pytest.approx(1 / math.sqrt(2), abs=1e-9)
        assert res.value == pytest.approx(1 / math.sqrt(2), abs=1e-9)

    def test_raw_points_are_hulled(self):
        direct = normal_distance(EUCLID, [0, 0], [[1, 0], [0, 1]])
        wrapped = normal_distance(EUCLID, [0, 0], PointCloudHull([[1, 0], [0, 1]]))
        assert direct.value == pytest.approx(wrapped.value, abs=1e-12)

    def test_witness_halfspace_contains_body_and_attains_value(self, rng):
        body = PointCloudHull(rng.standard_normal((8, 3)) + 2.0)
        x = np.zeros(3)
        res = normal_distance(EUCLID, x, body, use_closed_forms=False)
        nu = res.witness_normal
        offset = body.support(nu)
        assert np.all(body.points @ nu <= offset + 1e-9)
        assert res.value == pytest.approx((float(nu @ x) - offset) / EUCLID(nu), abs=1e-9)

    def test_empty_polytope_raises(self):
        empty = HPolytope([HalfSpace(point=[0.0], normal=[1.0]),
                           HalfSpace(point=[1.0], normal=[-1.0])])
        with pytest.raises(EmptyBodyError):
            normal_distance(EUCLID, [0.0], empty)

    def test_single_halfspace_polytope_is_exact(self):
        poly = HPolytope([HalfSpace(point=[-1.0, 0.0], normal=[1.0, 0.0])])
        res = normal_distance(EUCLID, [1.0, 0.0], poly)
        assert res.value == pytest.approx(2.0, abs=1e-12)

    def test_unbounded_polytope_distance(self):
        quadrant = HPolytope([HalfSpace(point=[1, 0], normal=[-1, 0]),
                              HalfSpace(point=[0, 1], normal=[0, -1])])
        # K = {x >= 1, y >= 1}; distance from the origin is attained on the
        # corner (1, 1) along a facet normal.
        res = normal_distance(EUCLID, [0.0, 0.0], quadrant)
        oracle = qp_projection_distance(np.zeros(2), quadrant)
        assert res.value == pytest.approx(oracle, abs=1e-8)

    def test_smooth_sublevel_distance(self):
        body = SmoothSublevel(lambda x: float(x @ x), lambda x: 2 * np.asarray(x),
                              1.0, interior_point=np.zeros(2))
        res = normal_distance(EUCLID, [3.0, 0.0], body)
        assert res.value == pytest.approx(2.0, abs=1e-7)


class TestSetToSet:
    def test_identical_sets(self):
        ball = Ball([0, 0], 1.0)
        assert normal_distance_set_to_set(EUCLID, ball, ball).value == 0.0

    def test_disjoint_balls(self):
        res = normal_distance_set_to_set(EUCLID, Ball([3, 0], 1.0), Ball([0, 0], 1.0))
        assert res.value == pytest.approx(1.0, abs=1e-9)

    def test_disjoint_balls_without_closed_form(self):
        res = normal_distance_set_to_set(EUCLID, Ball([3, 0], 1.0), Ball([0, 0], 1.0),
                                         use_closed_forms=False)
        assert res.value == pytest.approx(1.0, abs=1e-6)

    def test_asymmetry_witness(self):
        # Arc of radius 2 whose hull contains (0, 1): the point-to-set
        # distance vanishes while the set-to-point distance is 1.
        t = np.linspace(math.pi / 6, 5 * math.pi / 6, 41)
        arc = np.stack([2 * np.cos(t), 2 * np.sin(t)], axis=1)
        singleton = np.array([[0.0, 1.0]])
        forward = normal_distance_set_to_set(EUCLID, arc, singleton).value
        backward = normal_distance_set_to_set(EUCLID, singleton, arc).value
        brute_forward = min(float(np.linalg.norm(a - singleton[0])) for a in arc)
        assert forward == pytest.approx(brute_forward, abs=1e-9)
        assert forward == pytest.approx(1.0, abs=1e-9)
        assert backward == pytest.approx(0.0, abs=1e-9)
        assert forward != backward

    def test_hull_source(self):
        src = PointCloudHull([[2.0, 0.0], [3.0, 1.0], [3.0, -1.0]])
        res = normal_distance_set_to_set(EUCLID, src, Ball([0, 0], 1.0))
        assert res.value == pytest.approx(1.0, abs=1e-6)


class TestNormalCone:
    def square(self):
        return Box([0, 0], [1, 1]).to_hpolytope()

    def test_interior_point_empty_cone(self):
        cone = normal_cone_at(self.square(), [0.5, 0.5])
        assert cone.generators == ()

    def test_facet_point_single_generator(self):
        cone = normal_cone_at(self.square(), [1.0, 0.5])
        assert len(cone.generators) == 1
        np.testing.assert_allclose(cone.generators[0], [1.0, 0.0])

    def test_vertex_two_generators(self):
        cone = normal_cone_at(self.square(), [1.0, 1.0])
        gens = {tuple(g) for g in cone.generators}
        assert gens == {(1.0, 0.0), (0.0, 1.0)}

    def test_outside_point_raises(self):
        with pytest.raises(GeometryError):
            normal_cone_at(self.square(), [2.0, 0.5])


class TestHausdorff:
    def test_single_point(self):
        assert hausdorff_distance([0, 0], [[2, 0]]) == pytest.approx(2.0)

    def test_member_point(self):
        assert hausdorff_distance([1, 1], [[1, 1], [5, 5]]) == 0.0

    def test_nonconvex_arc_versus_its_hull(self):
        # Arc at Euclidean distance 2 from the origin whose chord passes at
        # height 1: nearest-point distance 2, normal distance 1.
        t = np.linspace(math.pi / 6, 5 * math.pi / 6, 41)
        arc = np.stack([2 * np.cos(t), 2 * np.sin(t)], axis=1)
        d_near = hausdorff_distance([0, 0], arc)
        assert d_near == pytest.approx(2.0, abs=1e-12)
        d_norm = normal_distance(EUCLID, [0, 0], arc).value
        oracle = qp_projection_distance(np.zeros(2), PointCloudHull(arc))
        assert d_norm == pytest.approx(oracle, abs=1e-8)
        assert d_norm == pytest.approx(1.0, abs=1e-8)
        assert d_near > d_norm

    def test_body_variants_match_qp(self, rng):
        for kind in ("ball", "box", "hull", "polytope"):
            from conftest import random_body
            body = random_body(rng, 3, kind)
            x = rng.standard_normal(3) * 3
            oracle = qp_projection_distance(x, body)
            if oracle is None:
                continue
            assert hausdorff_distance(x, body) == pytest.approx(oracle, abs=1e-6)


class TestWeightedHamming:
    def test_all_coordinates_differ(self):
        assert weighted_hamming([1, 1], [0, 0], [1, 1]) == pytest.approx(2.0)

    def test_equal_points(self):
        assert weighted_hamming([1, 1], [3, 4], [3, 4]) == 0.0

    def test_single_difference(self):
        assert weighted_hamming([0.6, 0.8], [0, 0], [1, 0]) == pytest.approx(0.6)

    def test_negative_weight_rejected(self):
        with pytest.raises(GeometryError):
            weighted_hamming([-0.1, 1.0], [0, 0], [1, 1])


class TestTalagrand:
    def test_single_far_point(self):
        # Both coordinates differ, so d_w = w1 + w2, maximized on the
        # diagonal of the weight quarter-circle.
        grid = np.linspace(0.0, math.pi / 2, 20001)
        oracle = max(math.cos(t) + math.sin(t) for t in grid)
        value = talagrand_distance([1, 1], [[0, 0]])
        assert value == pytest.approx(oracle, abs=1e-6)
        assert value == pytest.approx(math.sqrt(2.0), abs=1e-8)

    def test_member_point(self):
        assert talagrand_distance([1, 1], [[1, 1], [0, 0]]) == 0.0

    def test_two_point_maximin(self):
        # Patterns (1,0) and (0,1): brute-force maximin over the quarter
        # circle gives 1/sqrt(2) at the balanced weight.
        grid = np.linspace(0.0, math.pi / 2, 200001)
        oracle = max(min(math.cos(t), math.sin(t)) for t in grid)
        value = talagrand_distance([1, 1], [[0, 1], [1, 0]])
        assert value == pytest.approx(oracle, abs=1e-6)
        assert value == pytest.approx(1 / math.sqrt(2.0), abs=1e-8)

    def test_three_dimensional_against_min_norm_oracle(self):
        # Maximin equals the smallest Euclidean norm over the convex hull of
        # the difference patterns (an independent QP formulation).
        import cvxpy as cp
        x = np.array([1.0, 1.0, 1.0])
        pts = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
        patterns = (pts != x).astype(float)
        lam = cp.Variable(3, nonneg=True)
        problem = cp.Problem(cp.Minimize(cp.sum_squares(patterns.T @ lam)),
                             [cp.sum(lam) == 1])
        problem.solve(solver=cp.CLARABEL)
        oracle = math.sqrt(problem.value)
        assert talagrand_distance(x, pts) == pytest.approx(oracle, abs=1e-6)

    def test_large_instance_flagged_inexact(self):
        rng = np.random.default_rng(3)
        pts = rng.integers(0, 2, size=(4, 5)).astype(float)
        with pytest.warns(UserWarning):
            result = talagrand_distance(np.ones(5), pts, detail=True)
        assert not result.exact
        assert result.value >= 0.0
