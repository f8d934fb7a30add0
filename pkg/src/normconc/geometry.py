"""Convex geometry core: half-spaces, support functions, and normal distances.

A direction functional ``psi`` (nonnegative, positively homogeneous of degree
one on row covectors) turns the linear separation of a point ``x`` from a set
``A`` into a distance.  For a single half-space ``H = {z : <nu, z> <= <nu, p>}``
the distance is the closed expression ``<nu, x - p>_+ / psi(nu)`` with the
convention ``0/0 = 0``.  For a general set it is the supremum of that quantity
over all half-spaces containing ``A``, which this module computes by
maximizing over separating directions ``nu``.

Also provided for comparison: Euclidean nearest-point (Hausdorff) distance,
weighted Hamming distance, and Talagrand's convex distance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize

MEMBERSHIP_TOL = 1e-9
# Directions where psi vanishes but separation is positive make the distance
# infinite; values below this threshold count as "vanishing".
DEGENERATE_PSI_TOL = 1e-12


class GeometryError(ValueError):
    """Invalid geometric input."""


class DimensionMismatchError(GeometryError):
    """Operands live in different dimensions."""


class EmptyBodyError(GeometryError):
    """The convex body has no points."""


def as_vector(x, dim=None, name="vector"):
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise GeometryError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} must have finite entries")
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"{name} has dimension {arr.size}, expected {dim}")
    return arr


def as_points(points, dim=None, name="point set"):
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise GeometryError(f"{name} must be a nonempty list of vectors")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} must have finite entries")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatchError(f"{name} has dimension {arr.shape[1]}, expected {dim}")
    return arr


# ---------------------------------------------------------------------------
# Half-spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfSpace:
    """Closed half-space ``{x : <normal, x> <= <normal, point>}``.

    The zero normal is allowed and denotes the degenerate half-space equal to
    the whole space.  Representations are not unique: rescaling the normal by
    a positive factor, or sliding the base point within the frontier, leaves
    the set unchanged.
    """

    point: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", as_vector(self.point, name="base point"))
        object.__setattr__(
            self, "normal", as_vector(self.normal, dim=self.point.size, name="normal")
        )

    @property
    def dim(self):
        return self.point.size

    @property
    def offset(self):
        return float(self.normal @ self.point)

    def contains(self, x, tol=0.0):
        x = as_vector(x, dim=self.dim)
        return float(self.normal @ x) <= self.offset + tol


def halfspace_contains(halfspace: HalfSpace, x) -> bool:
    """Exact membership test; always true for the zero normal."""
    return halfspace.contains(x)


# ---------------------------------------------------------------------------
# Direction functionals (psi)
# ---------------------------------------------------------------------------


class PsiFunctional:
    """Nonnegative functional on directions, homogeneous of degree one.

    Subclasses whose unit ball ``{nu : psi(nu) <= 1}`` is an intersection of
    ellipsoids expose the defining quadratic forms, which the distance
    optimizer exploits; arbitrary 1-homogeneous evaluators fall back to a
    sphere search.
    """

    def __call__(self, nu) -> float:
        raise NotImplementedError

    def quadratic_forms(self, dim):
        """PSD matrices W with unit ball {nu : nu
        @ W @ nu <= 1 for all W}, or None."""
        return None

    def kernel_basis(self, dim):
        """Orthonormal basis of the subspace where psi vanishes."""
        return np.zeros((dim, 0))


class EuclideanPsi(PsiFunctional):
    """psi(nu) = ||nu||_2."""

    def __call__(self, nu):
        return float(np.linalg.norm(np.asarray(nu, dtype=float)))

    def quadratic_forms(self, dim):
        return [np.eye(dim)]

    def __repr__(self):
        return "EuclideanPsi()"


class WeightedQuadraticPsi(PsiFunctional):
    """psi(nu) = sqrt(nu @ W @ nu) for a symmetric PSD matrix W."""

    def __init__(self, matrix):
        W = np.asarray(matrix, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise GeometryError("weight matrix must be square")
        if not np.allclose(W, W.T, atol=1e-10):
            raise GeometryError("weight matrix must be symmetric")
        W = 0.5 * (W + W.T)
        eigvals, eigvecs = np.linalg.eigh(W)
        scale = max(1.0, float(eigvals[-1]))
        if eigvals[0] < -1e-10 * scale:
            raise GeometryError("weight matrix must be positive semidefinite")
        self.matrix = W
        self._eigvals = np.clip(eigvals, 0.0, None)
        self._eigvecs = eigvecs
        self.dim = W.shape[0]

    def __call__(self, nu):
        nu = np.asarray(nu, dtype=float)
        return float(math.sqrt(max(float(nu @ self.matrix @ nu), 0.0)))

    def quadratic_forms(self, dim):
        if dim != self.dim:
            raise DimensionMismatchError(f"psi is {self.dim}-dimensional, expected {dim}")
        return [self.matrix]

    def kernel_basis(self, dim):
        if dim != self.dim:
            raise DimensionMismatchError(f"psi is {self.dim}-dimensional, expected {dim}")
        scale = max(1.0, float(self._eigvals[-1]))
        mask = self._eigvals <= DEGENERATE_PSI_TOL * scale
        return self._eigvecs[:, mask]

    def isotropic_scale(self):
        """Return sigma if W = sigma^2 I, else None."""
        d = np.diag(self.matrix)
        if d.size == 0:
            return None
        off = self.matrix - np.diag(d)
        if np.allclose(off, 0.0, atol=1e-14) and np.allclose(d, d[0], atol=1e-14) and d[0] > 0:
            return math.sqrt(float(d[0]))
        return None

    def __repr__(self):
        return f"WeightedQuadraticPsi(dim={self.dim})"


class MaxOfQuadraticsPsi(PsiFunctional):
    """psi(nu) = max_i sqrt(nu @ W_i @ nu) over a family of PSD matrices."""

    def __init__(self, matrices):
        members = [WeightedQuadraticPsi(W) for W in matrices]
        if not members:
            raise GeometryError("need at least one weight matrix")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise DimensionMismatchError("weight matrices have mixed dimensions")
        self.members = members
        self.dim = members[0].dim

    def __call__(self, nu):
        return max(m(nu) for m in self.members)

    def quadratic_forms(self, dim):
        if dim != self.dim:
            raise DimensionMismatchError(f"psi is {self.dim}-dimensional, expected {dim}")
        return [m.matrix for m in self.members]

    def kernel_basis(self, dim):
        # psi vanishes exactly where every member form does.
        total = WeightedQuadraticPsi(sum(m.matrix for m in self.members))
        return total.kernel_basis(dim)

    def __repr__(self):
        return f"MaxOfQuadraticsPsi(n={len(self.members)}, dim={self.dim})"


class CustomPsi(PsiFunctional):
    """Wrap an arbitrary 1-homogeneous nonnegative evaluator."""

    def __init__(self, fn, dim=None, name="custom"):
        self.fn = fn
        self.dim = dim
        self.name = name

    def __call__(self, nu):
        value = float(self.fn(np.asarray(nu, dtype=float)))
        if value < 0:
            raise GeometryError("psi evaluator returned a negative value")
        return value

    def __repr__(self):
        return f"CustomPsi({self.name})"


def cuboid_psi(interval_lengths) -> WeightedQuadraticPsi:
    """psi(nu) = (1/2) sqrt(sum_n L_n^2 nu_n^2) for coordinate ranges L_n."""
    L = as_vector(interval_lengths, name="interval lengths")
    if np.any(L < 0):
        raise GeometryError("interval lengths must be nonnegative")
    return WeightedQuadraticPsi(np.diag(L**2) / 4.0)


def empirical_mean_psi(diameters, sample_counts) -> WeightedQuadraticPsi:
    """psi(nu) = (1/2) sqrt(sum_n nu_n^2 D_n^2 / M_n) for per-coordinate
    oscillation diameters D_n and sample counts M_n."""
    D = as_vector(diameters, name="diameters")
    M = as_vector(sample_counts, dim=D.size, name="sample counts")
    if np.any(D < 0):
        raise GeometryError("diameters must be nonnegative")
    if np.any(M < 1):
        raise GeometryError("sample counts must be >= 1")
    return WeightedQuadraticPsi(np.diag(D**2 / M) / 4.0)


def gaussian_family_psi(covariances) -> PsiFunctional:
    """psi(nu) = max over the family of sqrt(nu @ C @ nu)."""
    covs = list(covariances)
    if len(covs) == 1:
        return WeightedQuadraticPsi(covs[0])
    return MaxOfQuadraticsPsi(covs)


# ---------------------------------------------------------------------------
# Convex bodies
# ---------------------------------------------------------------------------


class ConvexBody:
    """Common contract: ``support(nu) = sup_{a in K} <nu, a>`` (may be +inf)."""

    dim: int

    def support(self, nu) -> float:
        raise NotImplementedError

    def support_point(self, nu):
        """A maximizer of <nu, .> over the body, or None if not attained."""
        raise NotImplementedError

    def contains(self, x, tol=MEMBERSHIP_TOL) -> bool:
        raise NotImplementedError

    def contains_batch(self, X, tol=MEMBERSHIP_TOL):
        X = as_points(X, dim=self.dim)
        return np.array([self.contains(row, tol=tol) for row in X])

    def reference_points(self):
        """Interior-ish anchor points used to seed direction searches."""
        return []


class PointCloudHull(ConvexBody):
    """Closed convex hull of finitely many points."""

    def __init__(self, points):
        self.points = as_points(points)
        self.dim = self.points.shape[1]

    def support(self, nu):
        nu = as_vector(nu, dim=self.dim)
        return float(np.max(self.points @ nu))

    def support_point(self, nu):
        nu = as_vector(nu, dim=self.dim)
        return self.points[int(np.argmax(self.points @ nu))].copy()

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_vector(x, dim=self.dim)
        # Small feasibility LP: x = P^T lam + s+ - s-, lam in simplex,
        # with minimal L1 slack; inside iff the slack is ~0.
        k, n = self.points.shape
        c = np.concatenate([np.zeros(k), np.ones(2 * n)])
        A_eq = np.block([[self.points.T, np.eye(n), -np.eye(n)],
                         [np.ones((1, k)), np.zeros((1, 2 * n))]])
        b_eq = np.concatenate([x, [1.0]])
        res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if not res.success:
            return False
        return float(res.fun) <= max(tol, 1e-9) * max(1.0, float(np.abs(x).max()))

    def contains_batch(self, X, tol=MEMBERSHIP_TOL):
        X = as_points(X, dim=self.dim)
        return np.array([self.contains(row, tol=tol) for row in X])

    def reference_points(self):
        return [self.points.mean(axis=0)]

    def __repr__(self):
        return f"PointCloudHull(n={self.points.shape[0]}, dim={self.dim})"


class Ball(ConvexBody):
    """Euclidean ball of given center and radius."""

    def __init__(self, center, radius):
        self.center = as_vector(center, name="center")
        self.radius = float(radius)
        if not math.isfinite(self.radius) or self.radius < 0:
            raise GeometryError("radius must be finite and nonnegative")
        self.dim = self.center.size

    def support(self, nu):
        nu = as_vector(nu, dim=self.dim)
        return float(nu @ self.center) + self.radius * float(np.linalg.norm(nu))

    def support_point(self, nu):
        nu = as_vector(nu, dim=self.dim)
        norm = float(np.linalg.norm(nu))
        if norm == 0.0:
            return self.center.copy()
        return self.center + self.radius * nu / norm

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_vector(x, dim=self.dim)
        return float(np.linalg.norm(x - self.center)) <= self.radius + tol

    def contains_batch(self, X, tol=MEMBERSHIP_TOL):
        X = as_points(X, dim=self.dim)
        return np.linalg.norm(X - self.center, axis=1) <= self.radius + tol

    def reference_points(self):
        return [self.center.copy()]

    def __repr__(self):
        return f"Ball(center={self.center!r}, radius={self.radius})"


class Box(ConvexBody):
    """Axis-aligned box [lower_1, upper_1] x ... x [lower_N, upper_N]."""

    def __init__(self, lower, upper):
        self.lower = as_vector(lower, name="lower")
        self.upper = as_vector(upper, dim=self.lower.size, name="upper")
        if np.any(self.lower > self.upper):
            raise GeometryError("box needs lower <= upper in every coordinate")
        self.dim = self.lower.size

    def support(self, nu):
        nu = as_vector(nu, dim=self.dim)
        return float(np.sum(np.where(nu >= 0, nu * self.upper, nu * self.lower)))

    def support_point(self, nu):
        nu = as_vector(nu, dim=self.dim)
        mid = 0.5 * (self.lower + self.upper)
        return np.where(nu > 0, self.upper, np.where(nu < 0, self.lower, mid))

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_vector(x, dim=self.dim)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def contains_batch(self, X, tol=MEMBERSHIP_TOL):
        X = as_points(X, dim=self.dim)
        return np.all((X >= self.lower - tol) & (X <= self.upper + tol), axis=1)

    def corners(self):
        if self.dim > 16:
            raise GeometryError("corner enumeration is limited to dim <= 16")
        grid = np.array(np.meshgrid(*[[lo, hi] for lo, hi in zip(self.lower, self.upper)],
                                    indexing="ij"))
        return grid.reshape(self.dim, -1).T

    def to_hpolytope(self):
        halves = []
        for n in range(self.dim):
            e = np.zeros(self.dim)
            e[n] = 1.0
            halves.append(HalfSpace(point=self.upper, normal=e))
            halves.append(HalfSpace(point=self.lower, normal=-e))
        return HPolytope(halves)

    def reference_points(self):
        return [0.5 * (self.lower + self.upper)]

    def __repr__(self):
        return f"Box(lower={self.lower!r}, upper={self.upper!r})"


class HPolytope(ConvexBody):
    """Intersection of finitely many closed half-spaces.

    May be unbounded; support values are +inf in directions outside the
    conic hull of the facet normals.  Distance queries require a nonempty
    intersection.
    """

    def __init__(self, halfspaces):
        halfspaces = list(halfspaces)
        if not halfspaces:
            raise GeometryError("need at least one half-space")
        dims = {h.dim for h in halfspaces}
        if len(dims) != 1:
            raise DimensionMismatchError("half-spaces have mixed dimensions")
        self.halfspaces = halfspaces
        self.dim = halfspaces[0].dim
        rows, offs = [], []
        for h in halfspaces:
            if np.linalg.norm(h.normal) == 0.0:
                continue  # degenerate half-space is the whole space
            rows.append(h.normal)
            offs.append(h.offset)
        self.A = np.array(rows) if rows else np.zeros((0, self.dim))
        self.b = np.array(offs) if offs else np.zeros(0)
        self._feasible = None
        self._interior = None

    @property
    def n_constraints(self):
        return self.A.shape[0]

    def ensure_feasible(self):
        if self._feasible is None:
            self._compute_center()
        if not self._feasible:
            raise EmptyBodyError("half-space intersection is empty")

    def _compute_center(self):
        if self.n_constraints == 0:
            self._feasible = True
            self._interior = np.zeros(self.dim)
            return
        # Chebyshev-style center, with the radius capped so unbounded
        # polytopes still yield a finite anchor point.
        norms = np.linalg.norm(self.A, axis=1)
        c = np.concatenate([np.zeros(self.dim), [-1.0]])
        A_ub = np.hstack([self.A, norms[:, None]])
        b_ub = self.b.copy()
        bounds = [(None, None)] * self.dim + [(0, 1e6)]
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.success:
            self._feasible = True
            self._interior = res.x[: self.dim]
        else:
            self._feasible = False
            self._interior = None

    def support(self, nu):
        value, _ = self._support_lp(nu)
        return value

    def support_point(self, nu):
        value, point = self._support_lp(nu)
        return point

    def _support_lp(self, nu):
        nu = as_vector(nu, dim=self.dim)
        if self.n_constraints == 0:
            if np.linalg.norm(nu) == 0.0:
                return 0.0, np.zeros(self.dim)
            return math.inf, None
        res = linprog(-nu, A_ub=self.A, b_ub=self.b, bounds=(None, None), method="highs")
        if res.status == 2:
            raise EmptyBodyError("half-space intersection is empty")
        if res.status == 3:
            return math.inf, None
        if not res.success:
            raise GeometryError(f"support LP failed: {res.message}")
        return float(-res.fun), res.x

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_vector(x, dim=self.dim)
        if self.n_constraints == 0:
            return True
        return bool(np.all(self.A @ x <= self.b + tol))

    def contains_batch(self, X, tol=MEMBERSHIP_TOL):
        X = as_points(X, dim=self.dim)
        if self.n_constraints == 0:
            return np.ones(X.shape[0], dtype=bool)
        return np.all(X @ self.A.T <= self.b + tol, axis=1)

    def reference_points(self):
        if self._interior is None:
            self._compute_center()
        return [self._interior.copy()] if self._interior is not None else []

    def __repr__(self):
        return f"HPolytope(m={self.n_constraints}, dim={self.dim})"


class SmoothSublevel(ConvexBody):
    """Sublevel set {x : f(x) <= level} for a differentiable quasiconvex f.

    Quasiconvexity is asserted by the caller.  ``interior_point`` should
    satisfy f < level and anchors searches; if omitted, a local minimization
    of f is attempted when first needed.
    """

    def __init__(self, fn, grad, level, interior_point=None, name="sublevel"):
        self.fn = fn
        self.grad = grad
        self.level = float(level)
        self.name = name
        self._interior = None if interior_point is None else as_vector(interior_point)
        self.dim = None if self._interior is None else self._interior.size

    def _require_dim(self, nu_or_x):
        arr = as_vector(nu_or_x)
        if self.dim is None:
            self.dim = arr.size
        return as_vector(arr, dim=self.dim)

    def interior_point(self):
        if self._interior is not None:
            return self._interior
        if self.dim is None:
            raise GeometryError("sublevel set needs an interior point or a first query")
        res = minimize(self.fn, np.zeros(self.dim), method="Nelder-Mead",
                       options={"maxiter": 400 * self.dim, "xatol": 1e-10, "fatol": 1e-12})
        if float(self.fn(res.x)) >= self.level:
            raise GeometryError("could not locate a point with f < level")
        self._interior = np.asarray(res.x, dtype=float)
        return self._interior

    def support(self, nu):
        value, _ = self._support_opt(nu)
        return value

    def support_point(self, nu):
        _, point = self._support_opt(nu)
        return point

    def _support_opt(self, nu):
        nu = self._require_dim(nu)
        if np.linalg.norm(nu) == 0.0:
            return 0.0, self.interior_point().copy()
        x0 = self.interior_point()
        cons = [{"type": "ineq", "fun": lambda z: self.level - self.fn(z),
                 "jac": lambda z: -np.asarray(self.grad(z), dtype=float)}]
        best = None
        for start in (x0, x0 + nu / max(np.linalg.norm(nu), 1e-12)):
            res = minimize(lambda z: -float(nu @ z), start, jac=lambda z: -nu,
                           constraints=cons, method="SLSQP",
                           options={"maxiter": 200, "ftol": 1e-12})
            if res.x is not None and float(self.fn(res.x)) <= self.level + 1e-7:
                val = float(nu @ res.x)
                if best is None or val > best[0]:
                    best = (val, np.asarray(res.x, dtype=float))
        if best is None:
            raise GeometryError("support optimization over the sublevel set failed")
        if np.linalg.norm(best[1]) > 1e5:
            return math.inf, None
        return best

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = self._require_dim(x)
        return float(self.fn(x)) <= self.level + tol

    def contains_batch(self, X, tol=MEMBERSHIP_TOL):
        X = as_points(X, dim=self.dim)
        return np.array([float(self.fn(row)) <= self.level + tol for row in X])

    def reference_points(self):
        return [self.interior_point().copy()]

    def __repr__(self):
        return f"SmoothSublevel({self.name}, level={self.level})"


@dataclass(frozen=True)
class NormalCone:
    """Outward normal cone at a boundary point: conic hull of the generators.

    An empty generator list means the cone is {0} (interior point).
    """

    base_point: np.ndarray
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "base_point", as_vector(self.base_point))
        gens = tuple(as_vector(g, dim=self.base_point.size) for g in self.generators)
        object.__setattr__(self, "generators", gens)


def ensure_body(obj, dim=None) -> ConvexBody:
    """Accept a ConvexBody as-is; wrap raw points into their convex hull."""
    if isinstance(obj, ConvexBody):
        if dim is not None and obj.dim not in (None, dim):
            raise DimensionMismatchError(f"body has dimension {obj.dim}, expected {dim}")
        return obj
    if isinstance(obj, HalfSpace):
        return HPolytope([obj])
    return PointCloudHull(as_points(obj, dim=dim))


def support_function(body, nu) -> float:
    """sup over the body of <nu, .>; +inf when no containing half-space has
    normal nu."""
    body = ensure_body(body)
    return body.support(nu)


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceResult:
    """A normal-distance value plus the maximizing half-space data.

    ``witness_normal`` is scaled so psi(witness) = 1 except in the degenerate
    case (psi vanishing on a separating direction), where the distance is
    +inf, the bound downstream is 0, and the witness keeps Euclidean norm 1.
    """

    value: float
    witness_normal: np.ndarray | None = None
    witness_point: np.ndarray | None = None
    converged: bool = True
    degenerate: bool = False
    n_starts: int = 0
    notes: str = ""

    def __float__(self):
        return float(self.value)


def distance_to_halfspace(psi: PsiFunctional, x, halfspace: HalfSpace) -> float:
    """<nu, x - p>_+ / psi(nu), with 0/0 = 0 and c/0 = +inf for c > 0."""
    x = as_vector(x, dim=halfspace.dim)
    numerator = float(halfspace.normal @ (x - halfspace.point))
    if numerator <= 0.0:
        return 0.0
    denominator = psi(halfspace.normal)
    if math.isinf(denominator):
        return 0.0
    if denominator <= 0.0:
        return math.inf
    return numerator / denominator


def _deterministic_unit_starts(x, body, dim, seed, n_random):
    starts = []
    for n in range(dim):
        e = np.zeros(dim)
        e[n] = 1.0
        starts.append(e)
        starts.append(-e)
    refs = body.reference_points()
    for ref in refs:
        d = x - ref
        norm = np.linalg.norm(d)
        if norm > 1e-14:
            starts.append(d / norm)
    # Direction from x toward a first-cut projection estimate.
    for ref in refs:
        d = x - ref
        norm = np.linalg.norm(d)
        if norm <= 1e-14:
            continue
        try:
            a = body.support_point(d / norm)
        except GeometryError:
            a = None
        if a is not None:
            d2 = x - a
            n2 = np.linalg.norm(d2)
            if n2 > 1e-14:
                starts.append(d2 / n2)
    rng = np.random.default_rng(seed)
    needed = max(n_random, 4 * dim - len(starts) + 2)
    for _ in range(needed):
        v = rng.standard_normal(dim)
        norm = np.linalg.norm(v)
        if norm > 1e-14:
            starts.append(v / norm)
    return starts


_SLSQP_OPTS = {"maxiter": 300, "ftol": 1e-12}


def _psi_ball_constraints(forms, nvar, nu_slice):
    cons = []
    for W in forms:
        def fun(z, W=W):
            nu = z[nu_slice]
            return np.array([1.0 - float(nu @ W @ nu)])

        def jac(z, W=W):
            g = np.zeros((1, nvar))
            g[0, nu_slice] = -2.0 * (W @ z[nu_slice])
            return g

        cons.append({"type": "ineq", "fun": fun, "jac": jac})
    return cons


def _scale_into_ball(nu, psi):
    value = psi(nu)
    if value <= DEGENERATE_PSI_TOL or not math.isfinite(value):
        return None
    return nu / value


def _maximize_hull(x, points, forms, psi, starts):
    k, dim = points.shape
    nvar = dim + 1
    cons = [{"type": "ineq",
             "fun": lambda z: z[dim] - points @ z[:dim],
             "jac": lambda z: np.hstack([-points, np.ones((k, 1))])}]
    cons += _psi_ball_constraints(forms, nvar, slice(0, dim))
    grad = np.concatenate([-x, [1.0]])
    best = (-math.inf, None, False)
    for nu0 in starts:
        nu0 = _scale_into_ball(nu0, psi)
        if nu0 is None:
            continue
        z0 = np.concatenate([nu0, [float(np.max(points @ nu0))]])
        res = minimize(lambda z: float(grad @ z), z0, jac=lambda z: grad,
                       constraints=cons, method="SLSQP", options=_SLSQP_OPTS)
        if res.x is None:
            continue
        nu = res.x[:dim]
        val = float(nu @ x) - float(np.max(points @ nu))
        if val > best[0] + 1e-15:
            best = (val, nu, bool(res.success))
    return best


def _maximize_box(x, box, forms, psi, starts):
    dim = box.dim
    nvar = 2 * dim
    upper, lower = box.upper, box.lower

    def con_u(z):
        return z[dim:] - z[:dim] * upper

    def con_l(z):
        return z[dim:] - z[:dim] * lower

    cons = [
        {"type": "ineq", "fun": con_u,
         "jac": lambda z: np.hstack([-np.diag(upper), np.eye(dim)])},
        {"type": "ineq", "fun": con_l,
         "jac": lambda z: np.hstack([-np.diag(lower), np.eye(dim)])},
    ]
    cons += _psi_ball_constraints(forms, nvar, slice(0, dim))
    grad = np.concatenate([-x, np.ones(dim)])
    best = (-math.inf, None, False)
    for nu0 in starts:
        nu0 = _scale_into_ball(nu0, psi)
        if nu0 is None:
            continue
        t0 = np.maximum(nu0 * upper, nu0 * lower)
        z0 = np.concatenate([nu0, t0])
        res = minimize(lambda z: float(grad @ z), z0, jac=lambda z: grad,
                       constraints=cons, method="SLSQP", options=_SLSQP_OPTS)
        if res.x is None:
            continue
        nu = res.x[:dim]
        val = float(nu @ x) - box.support(nu)
        if val > best[0] + 1e-15:
            best = (val, nu, bool(res.success))
    return best


def _maximize_ball(x, ball, forms, psi, starts):
    dim = ball.dim
    shift = x - ball.center
    r = ball.radius

    def neg_obj(nu):
        return -(float(nu @ shift) - r * float(np.linalg.norm(nu)))

    def neg_jac(nu):
        norm = float(np.linalg.norm(nu))
        unit = nu / norm if norm > 1e-14 else np.zeros(dim)
        return -(shift - r * unit)

    cons = _psi_ball_constraints(forms, dim, slice(0, dim))
    best = (-math.inf, None, False)
    for nu0 in starts:
        nu0 = _scale_into_ball(nu0, psi)
        if nu0 is None:
            continue
        res = minimize(neg_obj, nu0, jac=neg_jac, constraints=cons,
                       method="SLSQP", options=_SLSQP_OPTS)
        if res.x is None:
            continue
        val = -neg_obj(res.x)
        if val > best[0] + 1e-15:
            best = (val, res.x.copy(), bool(res.success))
    return best


def _maximize_hpolytope(x, poly, forms, psi, seed):
    """Search normals in the conic hull of the facet rows, which carries every
    direction with a finite support value."""
    m, dim = poly.A.shape
    if m == 0:
        return (0.0, None, True)
    r = poly.A @ x - poly.b
    quads = [poly.A @ W @ poly.A.T for W in forms]
    cons = []
    for Q in quads:
        cons.append({
            "type": "ineq",
            "fun": lambda mu, Q=Q: np.array([1.0 - float(mu @ Q @ mu)]),
            "jac": lambda mu, Q=Q: (-2.0 * (Q @ mu)).reshape(1, -1),
        })
    bounds = [(0.0, None)] * m
    rng = np.random.default_rng(seed)
    starts = []
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        starts.append(e)
    starts.append(np.ones(m))
    for _ in range(max(4 * dim - m - 1, 3)):
        starts.append(rng.random(m) + 1e-3)
    best = (-math.inf, None, False)
    for mu0 in starts:
        nu0 = poly.A.T @ mu0
        scale = psi(nu0)
        if scale <= DEGENERATE_PSI_TOL:
            continue
        mu0 = mu0 / scale
        res = minimize(lambda mu: -float(mu @ r), mu0, jac=lambda mu: -r,
                       constraints=cons, bounds=bounds,
                       method="SLSQP", options=_SLSQP_OPTS)
        if res.x is None:
            continue
        mu = np.clip(res.x, 0.0, None)
        val = float(mu @ r)
        nu = poly.A.T @ mu
        if np.linalg.norm(nu) <= 1e-14:
            continue
        if val > best[0] + 1e-15:
            best = (val, nu, bool(res.success))
    return best


def _maximize_sublevel(x, body, psi, seed):
    """Best supporting half-space of a smooth quasiconvex sublevel set.

    At a boundary point p the outward normal is grad f(p), so the distance is
    the maximum over the boundary of <grad f(p), x - p>_+ / psi(grad f(p)).
    """
    interior = body.interior_point()
    fx = float(body.fn(x))
    if fx <= body.level:
        return (0.0, None, True)

    def boundary_between(lo_point, hi_point):
        lo, hi = 0.0, 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            z = lo_point + mid * (hi_point - lo_point)
            if float(body.fn(z)) <= body.level:
                lo = mid
            else:
                hi = mid
        return lo_point + lo * (hi_point - lo_point)

    p0 = boundary_between(interior, x)

    def ratio(p):
        g = np.asarray(body.grad(p), dtype=float)
        den = psi(g)
        num = float(g @ (x - p))
        if den <= DEGENERATE_PSI_TOL:
            return -math.inf if num <= 0 else math.inf
        return num / den

    cons = [{"type": "ineq", "fun": lambda p: body.level - float(body.fn(p)),
             "jac": lambda p: -np.asarray(body.grad(p), dtype=float)}]
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.linalg.norm(x - interior)))
    starts = [p0]
    for _ in range(max(4, 2 * body.dim)):
        jitter = rng.standard_normal(body.dim) * 0.1 * scale
        starts.append(boundary_between(interior, x + jitter))
    best = (-math.inf, None, False)

    def consider(p, success):
        nonlocal best
        if float(body.fn(p)) > body.level + 1e-6:
            return
        val = ratio(p)
        if val > best[0] + 1e-15:
            best = (val, np.asarray(body.grad(p), dtype=float), success)

    for start in starts:
        consider(start, True)
        res = minimize(lambda p: -ratio(p), start, jac="3-point", constraints=cons,
                       method="SLSQP", options={"maxiter": 200, "ftol": 1e-12})
        if res.x is not None:
            consider(res.x, bool(res.success))
    if best[1] is None:
        return (ratio(p0), np.asarray(body.grad(p0), dtype=float), False)
    return best


def _kernel_probe(x, body, basis, seed):
    """Maximize <nu, x> - support(nu) over unit nu in the span of ``basis``.

    A positive value certifies infinite distance: psi vanishes on a direction
    that strictly separates x from the body.
    """
    k = basis.shape[1]
    if k == 0:
        return None
    euclid = EuclideanPsi()
    if isinstance(body, PointCloudHull):
        sub = _maximize_hull(basis.T @ x, body.points @ basis, [np.eye(k)], euclid,
                             _subspace_starts(k, seed))
        val, c, _ = sub
        nu = basis @ c if c is not None else None
    elif isinstance(body, Ball):
        sub_ball = Ball(basis.T @ body.center, body.radius)
        sub = _maximize_ball(basis.T @ x, sub_ball, [np.eye(k)], euclid,
                             _subspace_starts(k, seed))
        val, c, _ = sub
        nu = basis @ c if c is not None else None
    elif isinstance(body, Box) and body.dim <= 16:
        sub = _maximize_hull(basis.T @ x, body.corners() @ basis, [np.eye(k)], euclid,
                             _subspace_starts(k, seed))
        val, c, _ = sub
        nu = basis @ c if c is not None else None
    else:
        # Generic probe through support evaluations on the kernel sphere.
        val, nu = -math.inf, None
        rng = np.random.default_rng(seed)
        candidates = [basis[:, i] * s for i in range(k) for s in (1.0, -1.0)]
        for _ in range(8 * k):
            c = rng.standard_normal(k)
            c /= np.linalg.norm(c)
            candidates.append(basis @ c)
        for cand in candidates:
            h = body.support(cand)
            if math.isinf(h):
                continue
            v = float(cand @ x) - h
            if v > val:
                val, nu = v, cand
    if val is not None and val > 1e-9:
        return nu / np.linalg.norm(nu)
    return None


def _subspace_starts(k, seed):
    starts = []
    for i in range(k):
        e = np.zeros(k)
        e[i] = 1.0
        starts.extend([e, -e])
    rng = np.random.default_rng(seed)
    for _ in range(max(2 * k, 4)):
        v = rng.standard_normal(k)
        starts.append(v / np.linalg.norm(v))
    return starts


def _sphere_search_custom(x, body, psi, starts):
    """Derivative-free ratio maximization on the Euclidean unit sphere, for
    psi without a quadratic unit-ball description."""
    dim = x.size

    def neg_ratio(v):
        norm = np.linalg.norm(v)
        if norm <= 1e-14:
            return 0.0
        nu = v / norm
        h = body.support(nu)
        if math.isinf(h):
            return 0.0
        num = float(nu @ x) - h
        den = psi(nu)
        if den <= DEGENERATE_PSI_TOL:
            return 0.0 if num <= 0 else -1e12
        return -num / den

    best = (-math.inf, None, False)
    for nu0 in starts:
        res = minimize(neg_ratio, nu0, method="Nelder-Mead",
                       options={"maxiter": 600 * dim, "xatol": 1e-12, "fatol": 1e-14})
        val = -res.fun
        if val > best[0] + 1e-15:
            nu = res.x / np.linalg.norm(res.x)
            best = (val, nu, bool(res.success))
    if best[0] >= 1e11:
        return (math.inf, best[1], True)
    return best


def _closed_form_isotropic(psi, x, body):
    """Exact distance for isotropic quadratic psi against balls and boxes."""
    sigma = None
    if isinstance(psi, EuclideanPsi):
        sigma = 1.0
    elif isinstance(psi, WeightedQuadraticPsi):
        sigma = psi.isotropic_scale()
    if sigma is None:
        return None
    if isinstance(body, Ball):
        gap = float(np.linalg.norm(x - body.center)) - body.radius
        if gap <= 0:
            return DistanceResult(0.0, notes="inside")
        nu = (x - body.center) / (np.linalg.norm(x - body.center) * sigma)
        return DistanceResult(gap / sigma, nu, body.support_point(nu), True)
    if isinstance(body, Box):
        proj = np.clip(x, body.lower, body.upper)
        gap = float(np.linalg.norm(x - proj))
        if gap <= 0:
            return DistanceResult(0.0, notes="inside")
        nu = (x - proj) / (gap * sigma)
        return DistanceResult(gap / sigma, nu, body.support_point(nu), True)
    return None


def normal_distance(psi: PsiFunctional, x, body, *, seed=0, n_random_starts=4,
                    use_closed_forms=True) -> DistanceResult:
    """Largest normalized separation ``<nu, x - p>_+ / psi(nu)`` over
    half-spaces H(p, nu) containing the body.

    Finite point sets are silently replaced by their convex hull, which does
    not change the value.  Returns 0 when x is in the body.  The witness
    half-space has offset equal to the support value of its normal.
    """
    body = ensure_body(body)
    x = as_vector(x, dim=body.dim, name="x")
    if isinstance(body, SmoothSublevel):
        body._require_dim(x)
    dim = x.size
    if isinstance(body, HPolytope):
        body.ensure_feasible()
    if body.contains(x):
        return DistanceResult(0.0, None, None, True, notes="inside")

    if use_closed_forms:
        closed = _closed_form_isotropic(psi, x, body)
        if closed is not None:
            return closed

    forms = psi.quadratic_forms(dim)

    if forms is not None:
        kernel = psi.kernel_basis(dim)
        if kernel.shape[1] > 0:
            nu_deg = _kernel_probe(x, body, kernel, seed)
            if nu_deg is not None:
                return DistanceResult(math.inf, nu_deg, None, True, degenerate=True,
                                      notes="psi vanishes on a separating direction")

    starts = _deterministic_unit_starts(x, body, dim, seed, n_random_starts)

    if forms is None:
        val, nu, ok = _sphere_search_custom(x, body, psi, starts)
        if math.isinf(val):
            return DistanceResult(math.inf, nu, None, ok, degenerate=True,
                                  notes="psi vanishes on a separating direction")
    elif isinstance(body, PointCloudHull):
        val, nu, ok = _maximize_hull(x, body.points, forms, psi, starts)
    elif isinstance(body, Box):
        val, nu, ok = _maximize_box(x, body, forms, psi, starts)
    elif isinstance(body, Ball):
        val, nu, ok = _maximize_ball(x, body, forms, psi, starts)
    elif isinstance(body, HPolytope):
        if body.n_constraints == 1:
            h = HalfSpace(point=body.A[0] * body.b[0] / float(body.A[0] @ body.A[0]),
                          normal=body.A[0])
            d = distance_to_halfspace(psi, x, h)
            nu0 = body.A[0]
            scale = psi(nu0)
            witness = nu0 / scale if scale > 0 else nu0 / np.linalg.norm(nu0)
            return DistanceResult(d, witness, body.support_point(witness),
                                  True, degenerate=math.isinf(d))
        val, nu, ok = _maximize_hpolytope(x, body, forms, psi, seed)
    elif isinstance(body, SmoothSublevel):
        val, nu, ok = _maximize_sublevel(x, body, psi, seed)
        if math.isinf(val):
            return DistanceResult(math.inf, nu, None, ok, degenerate=True,
                                  notes="psi vanishes on a separating direction")
    else:
        raise GeometryError(f"unsupported body type {type(body).__name__}")

    n_starts = len(starts)
    if nu is None or val <= 0.0:
        return DistanceResult(0.0, None, None, True, n_starts=n_starts,
                              notes="no separating half-space found")
    # Re-evaluate the exact ratio at the witness so reported values never
    # exceed a true supporting-half-space distance.
    scale = psi(nu)
    if scale <= DEGENERATE_PSI_TOL:
        return DistanceResult(math.inf, nu / np.linalg.norm(nu), None, ok,
                              degenerate=True,
                              notes="psi vanishes on a separating direction")
    nu_hat = nu / scale
    h_val = body.support(nu_hat)
    value = max(float(nu_hat @ x) - h_val, 0.0)
    point = body.support_point(nu_hat)
    return DistanceResult(value, nu_hat, point, ok, n_starts=n_starts)


def normal_distance_set_to_set(psi: PsiFunctional, source, target, *, seed=0,
                               use_closed_forms=True) -> DistanceResult:
    """Infimum over source points of their normal distance to the target.

    The source may be a finite point set (infimum over the listed points,
    matching the set-to-set definition) or a convex body (infimum over the
    whole body).  Not symmetric in its arguments.
    """
    target_body = ensure_body(target)
    if not isinstance(source, ConvexBody):
        pts = as_points(source, dim=target_body.dim)
        best = None
        for row in pts:
            res = normal_distance(psi, row, target_body, seed=seed,
                                  use_closed_forms=use_closed_forms)
            if best is None or res.value < best.value:
                best = res
            if best.value == 0.0:
                break
        return best
    source_body = source
    if source_body.dim != target_body.dim:
        raise DimensionMismatchError("source and target dimensions differ")

    for ref in source_body.reference_points():
        if target_body.contains(ref):
            return DistanceResult(0.0, None, None, True, notes="sets overlap")

    # Isotropic-psi ball pair has an exact expression.
    sigma = None
    if isinstance(psi, EuclideanPsi):
        sigma = 1.0
    elif isinstance(psi, WeightedQuadraticPsi):
        sigma = psi.isotropic_scale()
    if (use_closed_forms and sigma is not None
            and isinstance(source_body, Ball) and isinstance(target_body, Ball)):
        gap = (float(np.linalg.norm(source_body.center - target_body.center))
               - source_body.radius - target_body.radius)
        value = max(gap, 0.0) / sigma
        return DistanceResult(value, None, None, True, notes="ball pair closed form")

    def objective(a):
        return normal_distance(psi, a, target_body, seed=seed,
                               use_closed_forms=use_closed_forms).value

    dim = source_body.dim
    cons = []
    bounds = None
    if isinstance(source_body, Ball):
        c, r = source_body.center, source_body.radius
        cons = [{"type": "ineq", "fun": lambda a: r**2 - float((a - c) @ (a - c))}]
    elif isinstance(source_body, Box):
        bounds = list(zip(source_body.lower, source_body.upper))
    elif isinstance(source_body, HPolytope):
        source_body.ensure_feasible()
        cons = [{"type": "ineq", "fun": lambda a: source_body.b - source_body.A @ a}]
    elif isinstance(source_body, SmoothSublevel):
        cons = [{"type": "ineq",
                 "fun": lambda a: source_body.level - float(source_body.fn(a))}]
    elif isinstance(source_body, PointCloudHull):
        pts = source_body.points
        k = pts.shape[0]

        def lam_objective(lam):
            return objective(pts.T @ lam)

        best = None
        rng = np.random.default_rng(seed)
        lam_starts = [np.ones(k) / k]
        for i in range(min(k, 6)):
            e = np.zeros(k)
            e[i] = 1.0
            lam_starts.append(e)
        for _ in range(3):
            w = rng.random(k)
            lam_starts.append(w / w.sum())
        lam_cons = [{"type": "eq", "fun": lambda lam: float(lam.sum()) - 1.0}]
        for lam0 in lam_starts:
            res = minimize(lam_objective, lam0, bounds=[(0, 1)] * k,
                           constraints=lam_cons, method="SLSQP",
                           options={"maxiter": 150, "ftol": 1e-12})
            if res.x is None:
                continue
            lam = np.clip(res.x, 0, None)
            lam = lam / lam.sum()
            val = lam_objective(lam)
            if best is None or val < best[0]:
                best = (val, pts.T @ lam)
        inner = normal_distance(psi, best[1], target_body, seed=seed,
                                use_closed_forms=use_closed_forms)
        return DistanceResult(best[0], inner.witness_normal, inner.witness_point,
                              inner.converged, inner.degenerate)
    else:
        raise GeometryError(f"unsupported source body {type(source_body).__name__}")

    rng = np.random.default_rng(seed)
    starts = list(source_body.reference_points())
    for ref in target_body.reference_points():
        # Pull the source anchor toward the target.
        d = ref - starts[0]
        norm = np.linalg.norm(d)
        if norm > 1e-14:
            sp = source_body.support_point(d / norm)
            if sp is not None:
                starts.append(sp)
    for _ in range(3):
        starts.append(starts[0] + rng.standard_normal(dim))
    best = None
    for a0 in starts:
        if not source_body.contains(a0, tol=1e-6):
            continue
        res = minimize(objective, a0, bounds=bounds, constraints=cons,
                       method="SLSQP", options={"maxiter": 150, "ftol": 1e-12})
        if res.x is None:
            continue
        a = res.x
        if not source_body.contains(a, tol=1e-6):
            continue
        val = objective(a)
        if best is None or val < best[0]:
            best = (val, a)
    if best is None:
        raise GeometryError("set-to-set search found no feasible source point")
    inner = normal_distance(psi, best[1], target_body, seed=seed,
                            use_closed_forms=use_closed_forms)
    return DistanceResult(best[0], inner.witness_normal, inner.witness_point,
                          inner.converged, inner.degenerate)


def normal_cone_at(poly: HPolytope, p, tol=MEMBERSHIP_TOL) -> NormalCone:
    """Generators of the outward normal cone: outward normals of the
    constraints active at p.  Empty at interior points."""
    if not isinstance(poly, HPolytope):
        raise GeometryError("normal cones are computed for half-space intersections")
    p = as_vector(p, dim=poly.dim)
    residuals = poly.A @ p - poly.b
    if np.any(residuals > tol):
        raise GeometryError("point is not in the body")
    active = np.abs(residuals) <= tol
    return NormalCone(base_point=p, generators=tuple(poly.A[i] for i in np.nonzero(active)[0]))


# ---------------------------------------------------------------------------
# Classical comparison distances
# ---------------------------------------------------------------------------


def hausdorff_distance(x, target) -> float:
    """Euclidean nearest-point distance inf ||x - a||_2 over the target."""
    if isinstance(target, ConvexBody):
        body = target
        x = as_vector(x, dim=body.dim)
        if isinstance(body, Ball):
            return max(float(np.linalg.norm(x - body.center)) - body.radius, 0.0)
        if isinstance(body, Box):
            return float(np.linalg.norm(x - np.clip(x, body.lower, body.upper)))
        if isinstance(body, PointCloudHull):
            pts = body.points
            k = pts.shape[0]

            def qobj(lam):
                diff = pts.T @ lam - x
                return float(diff @ diff)

            def qjac(lam):
                return 2.0 * (pts @ (pts.T @ lam - x))

            res = minimize(qobj, np.ones(k) / k, jac=qjac, bounds=[(0, 1)] * k,
                           constraints=[{"type": "eq",
                                         "fun": lambda lam: float(lam.sum()) - 1.0}],
                           method="SLSQP", options={"maxiter": 300, "ftol": 1e-14})
            return float(np.linalg.norm(pts.T @ res.x - x))
        if isinstance(body, HPolytope):
            body.ensure_feasible()
            if body.contains(x):
                return 0.0

            def qobj(z):
                return float((z - x) @ (z - x))

            res = minimize(qobj, body.reference_points()[0], jac=lambda z: 2.0 * (z - x),
                           constraints=[{"type": "ineq",
                                         "fun": lambda z: body.b - body.A @ z}],
                           method="SLSQP", options={"maxiter": 300, "ftol": 1e-14})
            return float(np.linalg.norm(res.x - x))
        if isinstance(body, SmoothSublevel):
            if body.contains(x):
                return 0.0
            res = minimize(lambda z: float((z - x) @ (z - x)), body.interior_point(),
                           constraints=[{"type": "ineq",
                                         "fun": lambda z: body.level - float(body.fn(z))}],
                           method="SLSQP", options={"maxiter": 300, "ftol": 1e-14})
            return float(np.linalg.norm(res.x - x))
        raise GeometryError(f"unsupported body type {type(body).__name__}")
    pts = as_points(target)
    x = as_vector(x, dim=pts.shape[1])
    return float(np.min(np.linalg.norm(pts - x, axis=1)))


def weighted_hamming(weights, x, y) -> float:
    """Sum of weights over coordinates where x and y differ."""
    w = as_vector(weights, name="weights")
    if np.any(w < 0):
        raise GeometryError("Hamming weights must be nonnegative")
    x = as_vector(x, dim=w.size)
    y = as_vector(y, dim=w.size)
    return float(np.sum(w[x != y]))


@dataclass(frozen=True)
class TalagrandResult:
    value: float
    weights: np.ndarray
    exact: bool


def _talagrand_patterns(x, points):
    delta = (points != x).astype(float)
    return np.unique(delta, axis=0)


def talagrand_distance(x, points, *, resolution=1e-3, max_exact_points=64,
                       detail=False):
    """sup over unit nonnegative weights w of min_a sum_n w_n [x_n != a_n].

    Exact dense-grid maximin for dimension <= 3 and small point sets; larger
    instances fall back to projected supergradient ascent and are flagged as
    inexact.  Positively homogeneous of degree zero in (x, points).
    """
    pts = as_points(points)
    x = as_vector(x, dim=pts.shape[1])
    patterns = _talagrand_patterns(x, pts)
    dim = x.size
    if np.any(np.all(patterns == 0.0, axis=1)):
        result = TalagrandResult(0.0, np.zeros(dim), True)
        return result if detail else result.value

    if dim == 1:
        # Patterns are all ones here, so the best (only) unit weight is w = 1.
        result = TalagrandResult(1.0, np.ones(1), True)
        return result if detail else result.value

    exact = dim <= 3 and pts.shape[0] <= max_exact_points
    if exact:
        if dim == 2:
            lo, hi, res = 0.0, math.pi / 2, resolution
            # The maximin is piecewise smooth; zooming the grid around the
            # winner sharpens the kinked maxima beyond the base resolution.
            for _ in range(4):
                t = np.arange(lo, hi + res, res)
                W = np.stack([np.cos(t), np.sin(t)], axis=1)
                vals = (W @ patterns.T).min(axis=1)
                i = int(np.argmax(vals))
                best_val, best_w = float(vals[i]), W[i]
                lo, hi = max(t[i] - res, 0.0), min(t[i] + res, math.pi / 2)
                res /= 64.0
            result = TalagrandResult(best_val, best_w, True)
        else:
            lo1 = lo2 = 0.0
            hi1 = hi2 = math.pi / 2
            res = resolution
            best_val, best_w = -1.0, None
            for _ in range(4):
                t1 = np.arange(lo1, hi1 + res, res)
                t2 = np.arange(lo2, hi2 + res, res)
                # w(phi, theta) = (sin phi cos theta, sin phi sin theta, cos phi)
                sp, cp = np.sin(t1)[:, None], np.cos(t1)[:, None]
                ct, st = np.cos(t2)[None, :], np.sin(t2)[None, :]
                vals = None
                for pat in patterns:
                    v = pat[0] * (sp * ct) + pat[1] * (sp * st) + pat[2] * cp
                    vals = v if vals is None else np.minimum(vals, v)
                i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
                best_val = float(vals[i, j])
                best_w = np.array([math.sin(t1[i]) * math.cos(t2[j]),
                                   math.sin(t1[i]) * math.sin(t2[j]),
                                   math.cos(t1[i])])
                lo1 = max(t1[i] - res, 0.0)
                hi1 = min(t1[i] + res, math.pi / 2)
                lo2 = max(t2[j] - res, 0.0)
                hi2 = min(t2[j] + res, math.pi / 2)
                res /= 16.0
            result = TalagrandResult(best_val, best_w, True)
        return result if detail else result.value

    warnings.warn("talagrand_distance: instance too large for the exact grid; "
                  "using alternating ascent (value may be a lower bound)",
                  stacklevel=2)
    w = np.ones(dim) / math.sqrt(dim)
    best_val, best_w = -1.0, w
    for it in range(1, 501):
        vals = patterns @ w
        i = int(np.argmin(vals))
        if float(vals[i]) > best_val:
            best_val, best_w = float(vals[i]), w.copy()
        g = patterns[i]
        w = w + (0.5 / math.sqrt(it)) * g
        w = np.clip(w, 0.0, None)
        norm = np.linalg.norm(w)
        if norm <= 1e-14:
            break
        w = w / norm
    result = TalagrandResult(best_val, best_w, False)
    return result if detail else result.value


def talagrand_set_distance(source_points, target_points, **kwargs) -> float:
    """inf over source points of their Talagrand distance to the target set."""
    src = as_points(source_points)
    return min(talagrand_distance(row, target_points, **kwargs) for row in src)
