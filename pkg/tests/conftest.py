"""Shared fixtures and independent oracles.

The distance oracles deliberately avoid the library's own search:
quadratic-programming projection (cvxpy, interior-point style solvers) and a
dense angular direction grid for low dimensions.
"""

import math

import cvxpy as cp
import numpy as np
import pytest

from normconc import Ball, Box, HalfSpace, HPolytope, PointCloudHull


def qp_projection_distance(x, body):
    """Euclidean distance from x to a convex body via a QP solver."""
    x = np.asarray(x, dtype=float)
    if isinstance(body, Ball):
        return max(float(np.linalg.norm(x - body.center)) - body.radius, 0.0)
    if isinstance(body, Box):
        return float(np.linalg.norm(x - np.clip(x, body.lower, body.upper)))
    if isinstance(body, PointCloudHull):
        lam = cp.Variable(body.points.shape[0], nonneg=True)
        problem = cp.Problem(cp.Minimize(cp.sum_squares(body.points.T @ lam - x)),
                             [cp.sum(lam) == 1])
        problem.solve(solver=cp.CLARABEL)
        return math.sqrt(max(problem.value, 0.0))
    if isinstance(body, HPolytope):
        z = cp.Variable(x.size)
        problem = cp.Problem(cp.Minimize(cp.sum_squares(z - x)),
                             [body.A @ z <= body.b])
        problem.solve(solver=cp.CLARABEL)
        if problem.status not in ("optimal", "optimal_inaccurate"):
            return None
        return math.sqrt(max(problem.value, 0.0))
    raise TypeError(f"no QP oracle for {type(body).__name__}")


def direction_grid(dim, n_points):
    """Roughly uniform unit directions: full circle for dim 2, spherical
    angle grid for dim 3."""
    if dim == 2:
        t = np.linspace(0.0, 2.0 * math.pi, n_points, endpoint=False)
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    if dim == 3:
        m = int(math.sqrt(n_points)) + 1
        phi = np.linspace(0.0, math.pi, m)
        theta = np.linspace(0.0, 2.0 * math.pi, 2 * m, endpoint=False)
        P, T = np.meshgrid(phi, theta, indexing="ij")
        return np.stack([np.sin(P) * np.cos(T), np.sin(P) * np.sin(T),
                         np.cos(P)], axis=-1).reshape(-1, 3)
    raise ValueError("grid oracle covers dimensions 2 and 3")


def grid_normal_distance(psi, x, body, n_points=10**4):
    """Dense-grid evaluation of the separation ratio over unit directions."""
    x = np.asarray(x, dtype=float)
    grid = direction_grid(x.size, n_points)
    if isinstance(body, Ball):
        supports = grid @ body.center + body.radius * np.linalg.norm(grid, axis=1)
    elif isinstance(body, Box):
        supports = np.sum(np.where(grid >= 0, grid * body.upper, grid * body.lower), axis=1)
    elif isinstance(body, PointCloudHull):
        supports = (grid @ body.points.T).max(axis=1)
    else:
        supports = np.array([body.support(nu) for nu in grid])
    forms = psi.quadratic_forms(x.size)
    if forms is not None:
        denominators = np.sqrt(np.max(
            [np.einsum("ij,jk,ik->i", grid, W, grid) for W in forms], axis=0))
    else:
        denominators = np.array([psi(nu) for nu in grid])
    numerators = grid @ x - supports
    mask = np.isfinite(supports) & (numerators > 0)
    if not mask.any():
        return 0.0
    if np.any(denominators[mask] <= 0):
        return math.inf
    return float(np.max(numerators[mask] / denominators[mask]))


def random_body(rng, dim, kind=None):
    """Random test bodies matching the acceptance-criterion mix."""
    kind = kind if kind is not None else rng.choice(["ball", "box", "hull", "polytope"])
    if kind == "ball":
        return Ball(rng.standard_normal(dim), float(rng.uniform(0.3, 2.0)))
    if kind == "box":
        lower = rng.standard_normal(dim)
        return Box(lower, lower + rng.uniform(0.3, 2.0, dim))
    if kind == "hull":
        return PointCloudHull(rng.standard_normal((10, dim)))
    if kind == "polytope":
        normals = rng.standard_normal((6, dim))
        interior = rng.standard_normal(dim) * 0.2
        offsets = normals @ interior + rng.uniform(0.5, 1.5, 6)
        return HPolytope([HalfSpace(point=a * b / float(a @ a), normal=a)
                          for a, b in zip(normals, offsets)])
    raise ValueError(kind)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
