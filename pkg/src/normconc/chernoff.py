"""Exponential-moment machinery: MGF models, half-space and convex-set
Chernoff bounds, scalar convex conjugates, and the moment-vs-Chernoff
comparison.

The half-space bound is ``P[X in H(p, nu)] <= inf_{s >= 0} e^{s <nu, p>}
M_X(-s nu)``; for a convex set the infimum runs over all containing
half-spaces, equivalently over the outward normal directions paired with
their support offsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .geometry import (
    Ball,
    Box,
    ConvexBody,
    DimensionMismatchError,
    EmptyBodyError,
    GeometryError,
    HalfSpace,
    HPolytope,
    PointCloudHull,
    WeightedQuadraticPsi,
    as_vector,
    cuboid_psi,
    distance_to_halfspace,
    ensure_body,
    normal_distance,
)

EXACT = "exact"
UPPER_BOUND = "upper-bound"


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Optimal data behind a bound: direction, base point, Chernoff parameter
    s, and the distance value when one was computed."""

    normal: np.ndarray | None = None
    point: np.ndarray | None = None
    s: float | None = None
    distance: float | None = None


@dataclass(frozen=True)
class BoundReport:
    """A probability upper bound with its log-domain exponent.

    ``value = min(exp(exponent), 1)``; the exponent survives underflow and is
    -inf in the degenerate case.  ``exactness`` records whether the model
    behind the bound evaluated its MGF exactly or as a certified upper bound.
    """

    value: float
    exponent: float
    method: str
    witness: Witness | None = None
    converged: bool = True
    degenerate: bool = False
    exactness: str = EXACT
    notes: str = ""

    def __post_init__(self):
        if not (math.isnan(self.value) or 0.0 <= self.value <= 1.0):
            raise ValueError(f"bound value {self.value} outside [0, 1]")


def report_from_exponent(exponent, method, **kwargs) -> BoundReport:
    exponent = float(exponent)
    value = math.exp(min(exponent, 0.0)) if exponent > -math.inf else 0.0
    return BoundReport(value=min(value, 1.0), exponent=min(exponent, 0.0),
                       method=method, **kwargs)


# ---------------------------------------------------------------------------
# MGF models
# ---------------------------------------------------------------------------


class MgfModel:
    """Moment-generating-function model M_X(l) = E[exp <l, X>].

    ``exactness`` is "exact" when log_mgf evaluates the true cumulant
    generating function and "upper-bound" when it evaluates a certified upper
    bound on it; downstream bounds inherit the tag.
    """

    dim: int
    exactness: str = EXACT

    def log_mgf(self, ell) -> float:
        raise NotImplementedError

    def mean(self) -> np.ndarray:
        raise NotImplementedError

    def quadratic_coefficient(self, nu):
        """q with log_mgf(s nu) = s <nu, mean> + s^2 q / 2, or None."""
        return None


class GaussianModel(MgfModel):
    """Gaussian vector: log M(l) = <l, m> + l @ C @ l / 2."""

    def __init__(self, mean, covariance):
        self._mean = as_vector(mean, name="mean")
        C = np.asarray(covariance, dtype=float)
        if C.shape != (self._mean.size, self._mean.size):
            raise DimensionMismatchError("covariance shape does not match the mean")
        if not np.allclose(C, C.T, atol=1e-10):
            raise GeometryError("covariance must be symmetric")
        C = 0.5 * (C + C.T)
        eigvals = np.linalg.eigvalsh(C)
        if eigvals[0] < -1e-10 * max(1.0, eigvals[-1]):
            raise GeometryError("covariance must be positive semidefinite")
        self.covariance = C
        self.dim = self._mean.size

    def log_mgf(self, ell):
        ell = as_vector(ell, dim=self.dim)
        return float(ell @ self._mean) + 0.5 * float(ell @ self.covariance @ ell)

    def mean(self):
        return self._mean.copy()

    def quadratic_coefficient(self, nu):
        nu = as_vector(nu, dim=self.dim)
        return max(float(nu @ self.covariance @ nu), 0.0)

    def psi(self) -> WeightedQuadraticPsi:
        return WeightedQuadraticPsi(self.covariance)


class BoundedProductModel(MgfModel):
    """Independent coordinates, each confined to an interval of known length.

    Hoeffding's lemma gives the certified MGF upper bound
    log M(l) <= <l, m> + sum_n l_n^2 L_n^2 / 8, so every downstream bound is
    tagged "upper-bound".
    """

    exactness = UPPER_BOUND

    def __init__(self, means, interval_lengths):
        self._mean = as_vector(means, name="means")
        self.interval_lengths = as_vector(interval_lengths, dim=self._mean.size,
                                          name="interval lengths")
        if np.any(self.interval_lengths < 0):
            raise GeometryError("interval lengths must be nonnegative")
        self.dim = self._mean.size

    def log_mgf(self, ell):
        ell = as_vector(ell, dim=self.dim)
        return float(ell @ self._mean) + float(np.sum((ell * self.interval_lengths) ** 2)) / 8.0

    def mean(self):
        return self._mean.copy()

    def quadratic_coefficient(self, nu):
        nu = as_vector(nu, dim=self.dim)
        return float(np.sum((nu * self.interval_lengths) ** 2)) / 4.0

    def psi(self) -> WeightedQuadraticPsi:
        return cuboid_psi(self.interval_lengths)


class EmpiricalModel(MgfModel):
    """Exact MGF of the empirical law of a scalar sample set."""

    def __init__(self, samples):
        arr = np.asarray(samples, dtype=float).ravel()
        if arr.size == 0 or not np.all(np.isfinite(arr)):
            raise GeometryError("need a nonempty finite sample set")
        self.samples = arr
        self.dim = 1

    def log_mgf(self, ell):
        s = float(np.asarray(ell).reshape(-1)[0])
        return float(logsumexp(s * self.samples) - math.log(self.samples.size))

    def mean(self):
        return np.array([float(self.samples.mean())])

    def log_moment(self, k):
        """log E[X^k] for nonnegative samples."""
        if np.any(self.samples < 0):
            raise GeometryError("moments in log domain need nonnegative samples")
        with np.errstate(divide="ignore"):
            logs = np.where(self.samples > 0, np.log(np.where(self.samples > 0,
                                                              self.samples, 1.0)), -np.inf)
        return float(logsumexp(k * logs) - math.log(self.samples.size))


class ScalarClosedForm(MgfModel):
    """Named one-dimensional laws with closed-form cumulant functions.

    ``asymptote(sign)`` returns (slope, intercept) of log M(s) as
    s -> sign * inf, which pins down conjugates at the edge of the support.
    """

    def __init__(self, kind, atoms, probs):
        self.kind = kind
        self.atoms = np.asarray(atoms, dtype=float)
        self.probs = np.asarray(probs, dtype=float)
        if self.atoms.size != self.probs.size or self.atoms.size == 0:
            raise GeometryError("atoms and probabilities must align")
        if abs(self.probs.sum() - 1.0) > 1e-12 or np.any(self.probs < 0):
            raise GeometryError("probabilities must be a distribution")
        self.dim = 1

    @classmethod
    def rademacher(cls):
        return cls("rademacher", [-1.0, 1.0], [0.5, 0.5])

    @classmethod
    def bernoulli(cls, a, b, q):
        if not 0.0 <= q <= 1.0:
            raise GeometryError("q must be a probability")
        return cls("bernoulli", [float(a), float(b)], [1.0 - q, q])

    @classmethod
    def point_mass(cls, x):
        return cls("point_mass", [float(x)], [1.0])

    def log_mgf(self, ell):
        s = float(np.asarray(ell).reshape(-1)[0])
        mask = self.probs > 0
        return float(logsumexp(s * self.atoms[mask], b=self.probs[mask]))

    def mean(self):
        return np.array([float(self.atoms @ self.probs)])

    def log_moment(self, k):
        if np.any(self.atoms[self.probs > 0] < 0):
            raise GeometryError("moments in log domain need nonnegative support")
        vals = self.atoms ** k
        return float(math.log(max(float(vals @ self.probs), 0.0))) \
            if float(vals @ self.probs) > 0 else -math.inf

    def asymptote(self, sign):
        mask = self.probs > 0
        atoms, probs = self.atoms[mask], self.probs[mask]
        if sign > 0:
            i = int(np.argmax(atoms))
        else:
            i = int(np.argmin(atoms))
        return float(atoms[i]), float(math.log(probs[i]))


# ---------------------------------------------------------------------------
# One-dimensional convex minimization
# ---------------------------------------------------------------------------

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(fn, lo, hi, rel_tol=1e-10, max_iter=200):
    """Golden-section minimum of a unimodal function on [lo, hi]."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if (b - a) <= rel_tol * max(1.0, abs(a), abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def _minimize_exponent(g, s_max=1e12):
    """Minimize a convex exponent g over s >= 0 by doubling out a bracket.

    Returns (s_star, g_star, divergent); divergent means the infimum sits at
    s -> inf (g decreasing past the cap), with g_star = -inf.
    """
    g0 = g(0.0)
    if not math.isfinite(g(1e-9)):
        return 0.0, g0, False
    s = 1.0
    prev = g0
    while s <= s_max:
        val = g(s)
        if not math.isfinite(val):
            # MGF blew up along the ray; back off to the finite segment.
            s_hi = s
            break
        if val > prev:
            s_hi = s
            break
        prev = val
        s *= 2.0
    else:
        return math.inf, -math.inf, True
    s_star, g_star = golden_section_min(g, 0.0, s_hi)
    if g0 <= g_star:
        return 0.0, g0, False
    return s_star, g_star, False


# ---------------------------------------------------------------------------
# Chernoff bounds
# ---------------------------------------------------------------------------


def chernoff_halfspace(model: MgfModel, halfspace: HalfSpace) -> BoundReport:
    """inf over s >= 0 of exp(s <nu, p>) M_X(-s nu).

    Quadratic-exponent models (Gaussian, bounded-product) use the closed-form
    minimizer; otherwise the convex exponent is minimized numerically.
    """
    nu = as_vector(halfspace.normal, dim=model.dim)
    p_off = halfspace.offset
    margin = float(model.mean() @ nu) - p_off

    q = model.quadratic_coefficient(nu)
    if q is not None:
        # g(s) = -s * margin + s^2 q / 2
        if q > 0.0:
            s_star = max(margin, 0.0) / q
            exponent = -max(margin, 0.0) ** 2 / (2.0 * q)
            return report_from_exponent(
                exponent, "chernoff-halfspace",
                witness=Witness(normal=nu, point=halfspace.point, s=s_star),
                exactness=model.exactness)
        if margin <= 0.0:
            return report_from_exponent(0.0, "chernoff-halfspace",
                                        witness=Witness(normal=nu, point=halfspace.point, s=0.0),
                                        exactness=model.exactness)
        return report_from_exponent(-math.inf, "chernoff-halfspace",
                                    witness=Witness(normal=nu, point=halfspace.point, s=math.inf),
                                    degenerate=True, exactness=model.exactness,
                                    notes="variance vanishes along the separating direction")

    def g(s):
        return s * p_off + model.log_mgf(-s * nu)

    if not math.isfinite(g(1e-9)) and not math.isfinite(g(1e-6)):
        return report_from_exponent(0.0, "chernoff-halfspace",
                                    witness=Witness(normal=nu, point=halfspace.point, s=0.0),
                                    converged=False, exactness=model.exactness,
                                    notes="MGF diverges for every s > 0; trivial bound")
    s_star, g_star, divergent = _minimize_exponent(g)
    return report_from_exponent(g_star, "chernoff-halfspace",
                                witness=Witness(normal=nu, point=halfspace.point, s=s_star),
                                degenerate=divergent, exactness=model.exactness,
                                notes="infimum at s -> inf" if divergent else "")


def chernoff_convex(model: MgfModel, body, *, seed=0) -> BoundReport:
    """Best half-space Chernoff bound over half-spaces containing the body.

    For quadratic-exponent models the optimum over directions is exactly the
    normal-distance maximization for the model's own psi, so the search is
    delegated there; scalar models check both axis directions.
    """
    if isinstance(body, HalfSpace):
        return chernoff_halfspace(model, body)
    body = ensure_body(body, dim=model.dim)

    if hasattr(model, "psi"):
        psi = model.psi()
        dist = normal_distance(psi, model.mean(), body, seed=seed)
        if dist.degenerate:
            return report_from_exponent(-math.inf, "chernoff-convex",
                                        witness=Witness(normal=dist.witness_normal,
                                                        distance=math.inf),
                                        degenerate=True, exactness=model.exactness,
                                        notes="psi vanishes on a separating direction")
        witness = Witness(normal=dist.witness_normal, point=dist.witness_point,
                          s=dist.value if dist.witness_normal is not None else 0.0,
                          distance=dist.value)
        return report_from_exponent(-0.5 * dist.value**2, "chernoff-convex",
                                    witness=witness, converged=dist.converged,
                                    exactness=model.exactness)

    if model.dim == 1:
        best = None
        for direction in (np.array([1.0]), np.array([-1.0])):
            h_val = body.support(direction)
            if math.isinf(h_val):
                continue
            rep = chernoff_halfspace(model, HalfSpace(point=np.array([h_val / direction[0]]),
                                                      normal=direction))
            if best is None or rep.exponent < best.exponent:
                best = rep
        if best is None:
            return report_from_exponent(0.0, "chernoff-convex", exactness=model.exactness,
                                        notes="no containing half-space with finite offset")
        return BoundReport(value=best.value, exponent=best.exponent, method="chernoff-convex",
                           witness=best.witness, converged=best.converged,
                           degenerate=best.degenerate, exactness=best.exactness)

    raise GeometryError("no direction search is available for this model type")


# ---------------------------------------------------------------------------
# Convex conjugates
# ---------------------------------------------------------------------------


def legendre_transform(cgf, x, *, asymptote_pos=None, asymptote_neg=None,
                       initial_bracket=1.0):
    """sup over l of l*x - cgf(l), for a scalar convex cgf finite near 0.

    ``asymptote_pos/neg`` are (slope, intercept) pairs describing cgf at
    l -> +/-inf; when given, supremum-at-infinity cases return the analytic
    limit (x equal to the edge slope) or +inf (x outside the reachable
    slopes).  Without them, a divergent supremum is reported as +inf.
    """
    x = float(x)

    if asymptote_pos is not None:
        slope, intercept = asymptote_pos
        if x > slope + 1e-13:
            return math.inf
        if abs(x - slope) <= 1e-13:
            return -intercept
    if asymptote_neg is not None:
        slope, intercept = asymptote_neg
        if x < slope - 1e-13:
            return math.inf
        if abs(x - slope) <= 1e-13:
            return -intercept

    def neg_psi(ell):
        try:
            value = cgf(ell) - ell * x
        except OverflowError:
            return math.inf
        return value

    # Expand a symmetric bracket until the (convex) objective rises on both
    # flanks; a flank still descending where evaluation overflows, or past
    # the expansion cap, certifies a divergent supremum.
    half = float(initial_bracket)
    base = neg_psi(0.0)
    while half <= 1e14:
        up, down = neg_psi(half), neg_psi(-half)
        if math.isfinite(up) and math.isfinite(down):
            if up > base and down > base:
                _, val = golden_section_min(neg_psi, -half, half)
                return -val + 0.0
            half *= 2.0
            continue
        h = half / 2.0
        if ((not math.isfinite(up) and neg_psi(h) < neg_psi(h / 2.0))
                or (not math.isfinite(down) and neg_psi(-h) < neg_psi(-h / 2.0))):
            return math.inf
        _, val = golden_section_min(neg_psi, -h, h)
        return -val + 0.0
    return math.inf


# ---------------------------------------------------------------------------
# Moment bound vs Chernoff bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentChernoffResult:
    """Both tail bounds for P[f(X) >= theta], f >= 0: the best polynomial
    moment bound over k <= k_max and the Chernoff bound over s >= 0."""

    moment_value: float
    moment_exponent: float
    best_k: int
    chernoff_value: float
    chernoff_exponent: float
    s_star: float
    chernoff_divergent: bool
    moment_exponents: tuple


def moment_vs_chernoff(model, theta, k_max=20) -> MomentChernoffResult:
    """min_{k <= k_max} theta^{-k} E[f^k] versus inf_{s >= 0} e^{-s theta}
    E[e^{s f}], for a nonnegative scalar law of f(X).

    On exact models the full-moment bound never exceeds the Chernoff bound;
    with the k-range truncated this can only fail when the Chernoff infimum
    escapes to s -> inf (both true infima are then 0), which is reported via
    ``chernoff_divergent`` instead of asserted.
    """
    if not isinstance(model, (EmpiricalModel, ScalarClosedForm)):
        model = EmpiricalModel(np.asarray(model, dtype=float))
    theta = float(theta)
    if theta <= 0:
        raise GeometryError("theta must be positive")
    log_theta = math.log(theta)

    per_k = []
    best_exp, best_k = 0.0, 0  # k = 0 gives the trivial bound 1
    for k in range(1, int(k_max) + 1):
        log_mk = model.log_moment(k)
        exp_k = log_mk - k * log_theta
        per_k.append(exp_k)
        if exp_k < best_exp:
            best_exp, best_k = exp_k, k

    def g(s):
        return -s * theta + model.log_mgf(s)

    s_star, g_star, divergent = _minimize_exponent(g)
    g_star = min(g_star, 0.0)

    if not divergent and model.exactness == EXACT and best_exp > g_star + 1e-12:
        raise AssertionError("moment bound exceeded the Chernoff bound on an exact model")

    return MomentChernoffResult(
        moment_value=min(math.exp(min(best_exp, 0.0)), 1.0),
        moment_exponent=best_exp,
        best_k=best_k,
        chernoff_value=0.0 if divergent else min(math.exp(g_star), 1.0),
        chernoff_exponent=-math.inf if divergent else g_star,
        s_star=s_star,
        chernoff_divergent=divergent,
        moment_exponents=tuple(per_k),
    )
