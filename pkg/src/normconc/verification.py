"""Monte Carlo validation of bounds and sharpness diagnostics.

Sampling uses the counter-based Philox 4x64 bit generator keyed by the
spec's seed; chunk c of a stream is generated from a fresh generator
advanced by ``c * CHUNK_STRIDE`` counter steps, so chunks are independent of
execution order and estimates are bit-identical across runs and worker
counts.  Membership counts are integers, making the reduction exactly
associative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chernoff import BoundReport
from .geometry import (
    Ball,
    Box,
    ConvexBody,
    EuclideanPsi,
    GeometryError,
    HalfSpace,
    HPolytope,
    PointCloudHull,
    SmoothSublevel,
    as_points,
    as_vector,
    ensure_body,
    normal_distance,
    talagrand_set_distance,
)

CHUNK_SIZE = 1 << 16
CHUNK_STRIDE = 1 << 34  # Philox counter steps reserved per chunk


def chunk_generator(seed, chunk_index):
    """Fresh generator for one chunk of the stream with the given seed."""
    bg = np.random.Philox(key=np.uint64(seed))
    bg.advance(int(chunk_index) * CHUNK_STRIDE)
    return np.random.Generator(bg)


# ---------------------------------------------------------------------------
# Sampler specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SamplerSpec:
    """Reproducible sampler: identical spec implies an identical stream."""

    seed: int
    sample_count: int

    def __post_init__(self):
        if int(self.sample_count) < 1:
            raise GeometryError("sample_count must be >= 1")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "sample_count", int(self.sample_count))

    @property
    def dim(self):
        raise NotImplementedError

    def draw_chunk(self, chunk_index, size):
        raise NotImplementedError

    def chunks(self):
        total = self.sample_count
        index = 0
        while total > 0:
            size = min(CHUNK_SIZE, total)
            yield self.draw_chunk(index, size)
            total -= size
            index += 1


@dataclass(frozen=True)
class ProductUniform(SamplerSpec):
    """Independent coordinates, uniform on per-coordinate intervals."""

    lower: tuple = ()
    upper: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        lo = as_vector(self.lower, name="lower")
        hi = as_vector(self.upper, dim=lo.size, name="upper")
        if np.any(lo > hi):
            raise GeometryError("need lower <= upper")
        object.__setattr__(self, "lower", tuple(lo))
        object.__setattr__(self, "upper", tuple(hi))

    @property
    def dim(self):
        return len(self.lower)

    def draw_chunk(self, chunk_index, size):
        rng = chunk_generator(self.seed, chunk_index)
        lo = np.array(self.lower)
        hi = np.array(self.upper)
        return lo + (hi - lo) * rng.random((size, self.dim))


@dataclass(frozen=True)
class HammingUniform(SamplerSpec):
    """Uniform on the +/-1 cube."""

    n_coordinates: int = 1

    def __post_init__(self):
        super().__post_init__()
        if int(self.n_coordinates) < 1:
            raise GeometryError("need at least one coordinate")
        object.__setattr__(self, "n_coordinates", int(self.n_coordinates))

    @property
    def dim(self):
        return self.n_coordinates

    def draw_chunk(self, chunk_index, size):
        rng = chunk_generator(self.seed, chunk_index)
        return 2.0 * rng.integers(0, 2, size=(size, self.dim)).astype(float) - 1.0


@dataclass(frozen=True)
class GaussianSampler(SamplerSpec):
    """Multivariate Gaussian with the given mean and covariance."""

    mean: tuple = ()
    covariance: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        mean = as_vector(self.mean, name="mean")
        C = np.asarray(self.covariance, dtype=float)
        if C.shape != (mean.size, mean.size):
            raise GeometryError("covariance shape does not match the mean")
        # Cholesky of the PSD covariance (with a tiny jitter escape for
        # semidefinite inputs).
        try:
            chol = np.linalg.cholesky(C)
        except np.linalg.LinAlgError:
            eigvals, eigvecs = np.linalg.eigh(0.5 * (C + C.T))
            if eigvals[0] < -1e-10 * max(1.0, eigvals[-1]):
                raise GeometryError("covariance must be positive semidefinite")
            chol = eigvecs @ np.diag(np.sqrt(np.clip(eigvals, 0.0, None)))
        object.__setattr__(self, "mean", tuple(mean))
        object.__setattr__(self, "covariance", tuple(map(tuple, C)))
        object.__setattr__(self, "_chol", chol)

    @property
    def dim(self):
        return len(self.mean)

    def draw_chunk(self, chunk_index, size):
        rng = chunk_generator(self.seed, chunk_index)
        z = rng.standard_normal((size, self.dim))
        return np.array(self.mean) + z @ self._chol.T


@dataclass(frozen=True)
class ProductTwoPoint(SamplerSpec):
    """Independent coordinates, each on two atoms {a_n, b_n} with
    P[b_n] = q_n."""

    a: tuple = ()
    b: tuple = ()
    q: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        a = as_vector(self.a, name="a")
        b = as_vector(self.b, dim=a.size, name="b")
        q = as_vector(self.q, dim=a.size, name="q")
        if np.any(q < 0) or np.any(q > 1):
            raise GeometryError("q must be probabilities")
        object.__setattr__(self, "a", tuple(a))
        object.__setattr__(self, "b", tuple(b))
        object.__setattr__(self, "q", tuple(q))

    @property
    def dim(self):
        return len(self.a)

    def draw_chunk(self, chunk_index, size):
        rng = chunk_generator(self.seed, chunk_index)
        u = rng.random((size, self.dim))
        a = np.array(self.a)
        b = np.array(self.b)
        return np.where(u < np.array(self.q), b, a)


@dataclass(frozen=True)
class EmpiricalMeanSampler(SamplerSpec):
    """Vector of empirical means of independent two-point coordinates.

    Coordinate n is the average of ``counts[n]`` independent draws from the
    two-point law (a_n, b_n, q_n); successes are sampled binomially.  This
    realizes the law whose concentration the empirical-mean bound certifies.
    """

    a: tuple = ()
    b: tuple = ()
    q: tuple = ()
    counts: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        a = as_vector(self.a, name="a")
        b = as_vector(self.b, dim=a.size, name="b")
        q = as_vector(self.q, dim=a.size, name="q")
        counts = as_vector(self.counts, dim=a.size, name="counts")
        if np.any(q < 0) or np.any(q > 1):
            raise GeometryError("q must be probabilities")
        if np.any(counts < 1):
            raise GeometryError("per-coordinate counts must be >= 1")
        object.__setattr__(self, "a", tuple(a))
        object.__setattr__(self, "b", tuple(b))
        object.__setattr__(self, "q", tuple(q))
        object.__setattr__(self, "counts", tuple(int(c) for c in counts))

    @property
    def dim(self):
        return len(self.a)

    def mean_vector(self):
        a, b, q = np.array(self.a), np.array(self.b), np.array(self.q)
        return a + (b - a) * q

    def diameter_vector(self):
        return np.abs(np.array(self.b) - np.array(self.a))

    def draw_chunk(self, chunk_index, size):
        rng = chunk_generator(self.seed, chunk_index)
        out = np.empty((size, self.dim))
        a, b = np.array(self.a), np.array(self.b)
        for n, (m, qn) in enumerate(zip(self.counts, self.q)):
            successes = rng.binomial(m, qn, size=size)
            out[:, n] = a[n] + (b[n] - a[n]) * successes / m
        return out


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EstimateResult:
    estimate: float
    standard_error: float
    sample_count: int
    hits: int
    predicate_failures: int = 0


def membership_predicate(target):
    """Vectorized membership test for the supported set descriptions."""
    if callable(target) and not isinstance(target, (ConvexBody, HalfSpace)):
        return target
    if isinstance(target, HalfSpace):
        nu = target.normal
        off = target.offset
        return lambda X: X @ nu <= off
    if isinstance(target, (Ball, Box, HPolytope, SmoothSublevel, PointCloudHull)):
        return lambda X: target.contains_batch(X)
    pts = as_points(target)

    def finite_set(X):
        hits = np.zeros(X.shape[0], dtype=bool)
        for row in pts:
            hits |= np.all(X == row, axis=1)
        return hits

    return finite_set


def estimate_probability(sampler: SamplerSpec, target) -> EstimateResult:
    """Empirical frequency of the target event with its binomial standard
    error.  Chunks whose predicate evaluation raises are retried row by row;
    rows that still fail count as misses and are reported."""
    if sampler.sample_count < 100:
        raise GeometryError("need at least 100 samples")
    predicate = membership_predicate(target)
    hits = 0
    failures = 0
    for chunk in sampler.chunks():
        try:
            inside = np.asarray(predicate(chunk), dtype=bool)
            if inside.shape != (chunk.shape[0],):
                raise ValueError("predicate returned a wrong shape")
            hits += int(inside.sum())
        except Exception:
            for row in chunk:
                try:
                    hits += bool(predicate(row.reshape(1, -1))[0])
                except Exception:
                    failures += 1
    n = sampler.sample_count
    p_hat = hits / n
    se = math.sqrt(p_hat * (1.0 - p_hat) / n)
    return EstimateResult(estimate=p_hat, standard_error=se, sample_count=n,
                          hits=hits, predicate_failures=failures)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    estimate: float
    standard_error: float
    bound_value: float
    bound_exponent: float
    slack: float
    sample_count: int
    notes: str = ""


def verify_bound(sampler: SamplerSpec, target, bound: BoundReport, *,
                 notes="") -> Verdict:
    """PASS when the Monte Carlo estimate does not exceed the bound by more
    than three standard errors.  Matching the sampler law to the bound's
    model is the caller's responsibility and can be recorded in the notes."""
    est = estimate_probability(sampler, target)
    threshold = bound.value + 3.0 * est.standard_error
    return Verdict(passed=est.estimate <= threshold,
                   estimate=est.estimate,
                   standard_error=est.standard_error,
                   bound_value=bound.value,
                   bound_exponent=bound.exponent,
                   slack=bound.value - est.estimate,
                   sample_count=est.sample_count,
                   notes=notes)


def talagrand_product_check(sampler: SamplerSpec, set_a, set_b) -> Verdict:
    """Check P[X in A] P[X in B] <= exp(-d_Tal(A, B)^2 / 4) empirically for
    a product-law sampler and small finite sets."""
    pts_a = as_points(set_a, dim=sampler.dim)
    pts_b = as_points(set_b, dim=sampler.dim)
    est_a = estimate_probability(sampler, pts_a)
    est_b = estimate_probability(sampler, pts_b)
    d = talagrand_set_distance(pts_a, pts_b)
    rhs = math.exp(-d * d / 4.0)
    lhs = est_a.estimate * est_b.estimate
    # Standard error of the product, first order.
    se = math.hypot(est_a.estimate * est_b.standard_error,
                    est_b.estimate * est_a.standard_error)
    return Verdict(passed=lhs <= rhs + 3.0 * se + 1e-12,
                   estimate=lhs, standard_error=se, bound_value=rhs,
                   bound_exponent=-d * d / 4.0, slack=rhs - lhs,
                   sample_count=sampler.sample_count,
                   notes=f"talagrand set distance {d:.6g}")


# ---------------------------------------------------------------------------
# Curvature and sharpness diagnostics
# ---------------------------------------------------------------------------


def finite_difference_hessian(f, p, step=None):
    """Central-difference Hessian with step 1e-4 * max(1, ||p||)."""
    p = as_vector(p)
    n = p.size
    h = step if step is not None else 1e-4 * max(1.0, float(np.linalg.norm(p)))
    H = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            if i == j:
                val = (f(p + ei) - 2.0 * f(p) + f(p - ei)) / h**2
            else:
                val = (f(p + ei + ej) - f(p + ei - ej)
                       - f(p - ei + ej) + f(p - ei - ej)) / (4.0 * h**2)
            H[i, j] = H[j, i] = val
    return H


@dataclass(frozen=True)
class SharpnessReport:
    """Finite-dimensional screen for asymptotic sharpness of the half-space
    bound at the witness point.

    ``log_gap`` evaluates 2 <nu, p>_-^2 / (N ||nu||^2) + log r - log sqrt(N),
    the per-dimension log-ratio between the measure of the tangent interior
    ball and the half-space bound under the centered unit-length-coordinate
    normalization (density constant dropped); the bound is plausibly sharp
    only when this gap is small, the top boundary curvature does not exceed
    (4N)^{-1/2}, and the interior ball radius is comparable to sqrt(N).
    """

    witness_point: np.ndarray | None
    witness_normal: np.ndarray | None
    interior_ball_radius: float
    curvature_eigenvalues: tuple
    eigenvalue_threshold: float
    log_gap: float
    verdict: str
    notes: str = ""


RADIUS_RATIO_FLOOR = 0.1  # heuristic floor for r / sqrt(N)


def _polytope_tangent_ball_radius(poly: HPolytope, p, inward):
    """Largest r with the ball of radius r tangent at p (center p - r *
    inward) inside the polytope; closed form from the facet inequalities."""
    norms = np.linalg.norm(poly.A, axis=1)
    centers_coef = norms - poly.A @ inward  # coefficient of r
    slack = poly.b - poly.A @ p
    r = math.inf
    for coef, s in zip(centers_coef, slack):
        if coef > 1e-12:
            r = min(r, max(s, 0.0) / coef)
    return r


def sharpness_diagnostics(psi, mean, body, *, dimension=None, seed=0,
                          fd_step=None) -> SharpnessReport:
    """Estimate interior-ball radius and boundary curvature at the distance
    witness and compare them against the sharpness thresholds."""
    mean = as_vector(mean)
    N = int(dimension) if dimension is not None else mean.size
    threshold = (4.0 * N) ** -0.5
    dist = normal_distance(psi, mean, body, seed=seed)
    p, nu = dist.witness_point, dist.witness_normal
    notes = []
    if p is None or nu is None:
        return SharpnessReport(None, None, math.nan, (), threshold, math.nan,
                               "inconclusive", "no separating witness")

    lambdas = ()
    if isinstance(body, Ball):
        r = body.radius
        lam1 = math.inf if r == 0 else 1.0 / (2.0 * r)
        lambdas = tuple([lam1] * max(mean.size - 1, 0))
    elif isinstance(body, SmoothSublevel):
        try:
            grad = as_vector(body.grad(p), dim=p.size)
            gnorm = float(np.linalg.norm(grad))
            if gnorm <= 1e-12:
                raise GeometryError("vanishing gradient at the witness")
            unit = grad / gnorm
            H = finite_difference_hessian(body.fn, p, step=fd_step)
            # Boundary curvatures: eigenvalues of the tangential Hessian
            # block divided by 2 ||grad f||.
            basis = np.linalg.svd(np.eye(p.size) - np.outer(unit, unit))[0][:, : p.size - 1]
            tangential = basis.T @ H @ basis
            eigs = np.sort(np.linalg.eigvalsh(tangential))[::-1]
            lambdas = tuple(eigs / (2.0 * gnorm))
            lam1 = lambdas[0] if lambdas else 0.0
            r = math.inf if lam1 <= 1e-12 else 1.0 / (2.0 * lam1)
        except Exception as exc:  # Hessian estimation failure
            return SharpnessReport(p, nu, math.nan, (), threshold, math.nan,
                                   "inconclusive", f"curvature estimation failed: {exc}")
    elif isinstance(body, HPolytope):
        inward = -nu / np.linalg.norm(nu)
        r = _polytope_tangent_ball_radius(body, p, inward)
        lam1 = math.inf if r == 0 else 1.0 / (2.0 * r)
        notes.append("flat facets; curvature from the tangent-ball radius")
    else:
        return SharpnessReport(p, nu, math.nan, (), threshold, math.nan,
                               "inconclusive", "unsupported body for diagnostics")

    if not lambdas:
        lambdas = (lam1,)
    nu_norm2 = float(nu @ nu)
    neg_part = max(-float(nu @ p), 0.0)
    if r > 0 and math.isfinite(r):
        log_gap = 2.0 * neg_part**2 / (N * nu_norm2) + math.log(r) - 0.5 * math.log(N)
    elif r == 0:
        log_gap = -math.inf
    else:
        log_gap = math.inf

    ratio = r / math.sqrt(N)
    if lambdas[0] > threshold + 1e-12 or ratio < RADIUS_RATIO_FLOOR:
        verdict = "not-sharp"
    else:
        verdict = "plausibly-sharp"
    notes.append("normalization: centered mean, unit coordinate ranges")
    return SharpnessReport(p, nu, float(r), lambdas, threshold, log_gap,
                           verdict, "; ".join(notes))


def log_equivalence_gap(seq_a, seq_b, *, log_domain=False):
    """(1/n) log a_n - (1/n) log b_n per index (1-based); two positive
    sequences are logarithmically equivalent when this tends to 0."""
    a = np.asarray(seq_a, dtype=float)
    b = np.asarray(seq_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise GeometryError("sequences must be equal-length vectors")
    if log_domain:
        log_a, log_b = a, b
    else:
        if np.any(a <= 0) or np.any(b <= 0):
            raise GeometryError("sequences must be positive (or pass log_domain=True)")
        log_a, log_b = np.log(a), np.log(b)
    n = np.arange(1, a.size + 1, dtype=float)
    return (log_a - log_b) / n
