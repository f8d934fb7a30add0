"""Concentration bounds driven by normal distances.

Each bound has the shape ``P[X in A] <= exp(-d(E[X], A)^2 / 2)`` where d is
the normal distance for a model-specific direction functional psi:

* Gaussian families: psi(nu)^2 = the largest nu @ C @ nu over the family.
* Independent bounded coordinates (cuboid): psi(nu) = (1/2) sqrt(sum L_n^2
  nu_n^2), which for the unit cube gives exp(-2 d^2) and for the +/-1 cube
  exp(-d^2 / 2) in the Euclidean normal distance.
* Vectors of empirical means: psi(nu) = (1/2) sqrt(sum nu_n^2 D_n^2 / M_n)
  with per-coordinate oscillation diameters D_n and sample counts M_n.

Bounded-difference (McDiarmid) tail bounds, the quadratic-form worked
example, sublevel-set bounds for differentiable quasiconvex functions, and
the per-coordinate orthant bound are provided for comparison.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .chernoff import BoundReport, GaussianModel, Witness, report_from_exponent
from .geometry import (
    ConvexBody,
    DistanceResult,
    GeometryError,
    HalfSpace,
    PsiFunctional,
    SmoothSublevel,
    as_vector,
    cuboid_psi,
    distance_to_halfspace,
    empirical_mean_psi,
    ensure_body,
    gaussian_family_psi,
    normal_distance,
)

# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianFamily:
    """A finite family of Gaussian vectors sharing one ambient dimension."""

    members: tuple

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise GeometryError("family must be nonempty")
        if not all(isinstance(m, GaussianModel) for m in members):
            members = tuple(GaussianModel(mean, cov) for mean, cov in members)
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise GeometryError("family members have mixed dimensions")
        object.__setattr__(self, "members", members)

    @property
    def dim(self):
        return self.members[0].dim

    def psi(self) -> PsiFunctional:
        return gaussian_family_psi([m.covariance for m in self.members])

    def mean_points(self):
        return [m.mean() for m in self.members]


@dataclass(frozen=True)
class CuboidModel:
    """Independent coordinates confined to intervals of the given lengths."""

    means: np.ndarray
    interval_lengths: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", as_vector(self.means, name="means"))
        object.__setattr__(self, "interval_lengths",
                           as_vector(self.interval_lengths, dim=self.means.size,
                                     name="interval lengths"))
        if np.any(self.interval_lengths < 0):
            raise GeometryError("interval lengths must be nonnegative")

    @property
    def dim(self):
        return self.means.size

    def psi(self) -> PsiFunctional:
        return cuboid_psi(self.interval_lengths)

    def mean_points(self):
        return [self.means.copy()]


@dataclass(frozen=True)
class EmpiricalMeanModel:
    """Coordinatewise empirical means of functions of independent inputs."""

    means: np.ndarray
    diameters: np.ndarray
    sample_counts: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", as_vector(self.means, name="means"))
        object.__setattr__(self, "diameters",
                           as_vector(self.diameters, dim=self.means.size, name="diameters"))
        object.__setattr__(self, "sample_counts",
                           as_vector(self.sample_counts, dim=self.means.size,
                                     name="sample counts"))
        if np.any(self.diameters < 0):
            raise GeometryError("diameters must be nonnegative")
        if np.any(self.sample_counts < 1):
            raise GeometryError("sample counts must be >= 1")

    @property
    def dim(self):
        return self.means.size

    def psi(self) -> PsiFunctional:
        return empirical_mean_psi(self.diameters, self.sample_counts)

    def mean_points(self):
        return [self.means.copy()]


@dataclass(frozen=True)
class DiameterSpec:
    """Per-coordinate oscillations of a function of independent inputs; the
    total diameter is always recomputed as their root sum of squares."""

    subdiameters: tuple

    def __post_init__(self):
        subs = tuple(float(s) for s in self.subdiameters)
        if any(s < 0 or not math.isfinite(s) for s in subs):
            raise GeometryError("subdiameters must be finite and nonnegative")
        object.__setattr__(self, "subdiameters", subs)

    @property
    def diameter(self) -> float:
        return math.sqrt(sum(s * s for s in self.subdiameters))


# ---------------------------------------------------------------------------
# Core bound
# ---------------------------------------------------------------------------


def _target_distance(psi, mean, target, seed=0) -> DistanceResult:
    if isinstance(target, HalfSpace):
        value = distance_to_halfspace(psi, mean, target)
        scale = psi(target.normal)
        if math.isinf(value):
            nu = target.normal / np.linalg.norm(target.normal)
            return DistanceResult(value, nu, target.point, True, degenerate=True)
        witness = target.normal / scale if scale > 0 else None
        return DistanceResult(value, witness, target.point.copy(), True)
    return normal_distance(psi, mean, ensure_body(target), seed=seed)


def _distance_report(dist: DistanceResult, method, notes="", exactness="exact"):
    if dist.degenerate or math.isinf(dist.value):
        return report_from_exponent(
            -math.inf, method,
            witness=Witness(normal=dist.witness_normal, distance=math.inf),
            converged=dist.converged, degenerate=True, exactness=exactness,
            notes=(notes + "; " if notes else "") + "infinite distance, bound 0")
    witness = Witness(normal=dist.witness_normal, point=dist.witness_point,
                      distance=dist.value)
    return report_from_exponent(-0.5 * dist.value**2, method, witness=witness,
                                converged=dist.converged, exactness=exactness,
                                notes=notes)


def portmanteau_bound(psi: PsiFunctional, mean, target, *, seed=0) -> BoundReport:
    """exp(-d(mean, target)^2 / 2) for any 1-homogeneous psi, with the
    distance witness attached.  The target may be a half-space, a convex
    body, or a finite point set (measured through its hull)."""
    mean = as_vector(mean, name="mean")
    dist = _target_distance(psi, mean, target, seed=seed)
    return _distance_report(dist, "portmanteau")


def gaussian_family_bound(family: GaussianFamily, target, *, seed=0) -> BoundReport:
    """Uniform bound over the family: the distance is taken from the set of
    member means (infimum over members) under the family psi."""
    psi = family.psi()
    best = None
    for mean in family.mean_points():
        dist = _target_distance(psi, mean, target, seed=seed)
        if best is None or dist.value < best.value:
            best = dist
        if best.value == 0.0:
            break
    return _distance_report(best, "portmanteau", notes="gaussian-family")


def cuboid_bound(model: CuboidModel, target, *, seed=0) -> BoundReport:
    """Bounded-coordinate bound; certified through the Hoeffding MGF bound,
    so reports carry the upper-bound tag."""
    dist = _target_distance(model.psi(), model.means, target, seed=seed)
    return _distance_report(dist, "portmanteau", notes="cuboid",
                            exactness="upper-bound")


def empirical_mean_bound(model: EmpiricalMeanModel, target, *, seed=0) -> BoundReport:
    """Concentration of the vector of empirical means around the true
    means."""
    dist = _target_distance(model.psi(), model.means, target, seed=seed)
    return _distance_report(dist, "portmanteau", notes="empirical-mean",
                            exactness="upper-bound")


# ---------------------------------------------------------------------------
# Bounded-difference tails
# ---------------------------------------------------------------------------


def mcdiarmid_tail(mean_f, diameter_spec, theta, side="lower") -> BoundReport:
    """Bounded-difference tail bound for f(X) with independent inputs:
    exp(-2 (mean - theta)_+^2 / D^2) for the lower tail and symmetrically for
    the upper tail."""
    if isinstance(diameter_spec, DiameterSpec):
        D = diameter_spec.diameter
    else:
        D = float(diameter_spec)
        if D < 0:
            raise GeometryError("diameter must be nonnegative")
    mean_f, theta = float(mean_f), float(theta)
    if math.isnan(mean_f) or math.isnan(theta):
        raise GeometryError("NaN inputs")
    if side == "lower":
        gap = max(mean_f - theta, 0.0)
    elif side == "upper":
        gap = max(theta - mean_f, 0.0)
    else:
        raise GeometryError("side must be 'lower' or 'upper'")
    if D == 0.0:
        exponent = -math.inf if gap > 0 else 0.0
    else:
        exponent = -2.0 * gap**2 / D**2
    return report_from_exponent(exponent, "mcdiarmid",
                                degenerate=(D == 0.0 and gap > 0))


# ---------------------------------------------------------------------------
# Worked example: a quadratic form on the centered unit cube
# ---------------------------------------------------------------------------


def quadratic_example_bounds(N, theta):
    """Both closed-form tail bounds for Q(x) = ||x - (1/2, ..., 1/2)||^2 / 2
    with X uniform-type on [-1/2, 1/2]^N, mean 0.

    The sublevel set {Q <= theta} is the ball of radius sqrt(2 theta) around
    (1/2, ..., 1/2).  The bounded-difference route gives
    exp(-8 (sqrt(N)/6 - theta/sqrt(N))_+^2); the half-space route gives
    exp(-(sqrt(N) - sqrt(8 theta))_+^2 / 2).
    """
    N = int(N)
    theta = float(theta)
    if N < 1 or theta <= 0:
        raise GeometryError("need N >= 1 and theta > 0")
    root_n = math.sqrt(N)
    mcd_gap = max(root_n / 6.0 - theta / root_n, 0.0)
    mcd = report_from_exponent(-8.0 * mcd_gap**2, "mcdiarmid",
                               notes="quadratic example")
    half_gap = max(root_n - math.sqrt(8.0 * theta), 0.0)
    half = report_from_exponent(-0.5 * half_gap**2, "portmanteau",
                                notes="quadratic example, half-space route",
                                exactness="upper-bound")
    return mcd, half


# ---------------------------------------------------------------------------
# Sublevel sets of quasiconvex functions
# ---------------------------------------------------------------------------


def spot_check_quasiconvex(f, center, scale, *, n_checks=100, seed=0, tol=1e-9):
    """Sample segment triples (x, y, t) and warn when
    f((1-t)x + ty) > max(f(x), f(y)); a heuristic screen, not a proof."""
    rng = np.random.default_rng(seed)
    center = as_vector(center)
    for _ in range(n_checks):
        x = center + scale * rng.standard_normal(center.size)
        y = center + scale * rng.standard_normal(center.size)
        t = rng.uniform()
        mid = (1 - t) * x + t * y
        fmax = max(float(f(x)), float(f(y)))
        if float(f(mid)) > fmax + tol * max(1.0, abs(fmax)):
            warnings.warn("function failed a quasiconvexity spot check; "
                          "sublevel bounds may be invalid", stacklevel=2)
            return False
    return True


def sublevel_bound(model, f, grad, theta, *, candidates=None, interior_point=None,
                   seed=0, check_quasiconvexity=True) -> BoundReport:
    """Tail bound P[f <= theta] through the model's psi: the infimum over
    level-set points p of exp(-<grad f(p), mean - p>_+^2 / (2 psi(grad
    f(p))^2)).

    ``candidates`` restricts the search to explicit points with f(p) <=
    theta; otherwise the level set is searched from a mean-to-interior
    bisection point.  A model with several means (a family) takes the worst
    member.
    """
    psi = model.psi()
    theta = float(theta)
    means = model.mean_points()

    exactness = "exact" if isinstance(model, GaussianFamily) else "upper-bound"

    for mean in means:
        if float(f(mean)) <= theta:
            return report_from_exponent(0.0, "sublevel", exactness=exactness,
                                        notes="mean lies in the sublevel set")

    if check_quasiconvexity:
        scale = max(1.0, max(float(np.linalg.norm(m)) for m in means))
        spot_check_quasiconvex(f, means[0], scale, seed=seed)

    best = None  # smallest distance across means: the family supremum
    for mean in means:
        if candidates is not None:
            cand_best = None
            usable = 0
            zero_grad = 0
            for p in candidates:
                p = as_vector(p, dim=mean.size)
                if float(f(p)) > theta + 1e-9:
                    continue
                usable += 1
                gvec = as_vector(grad(p), dim=mean.size)
                if float(np.linalg.norm(gvec)) <= 1e-14:
                    zero_grad += 1
                    continue
                d = distance_to_halfspace(psi, mean, HalfSpace(point=p, normal=gvec))
                if cand_best is None or d > cand_best[0]:
                    cand_best = (d, p, gvec)
            if usable == 0:
                raise GeometryError("no candidate satisfies f(p) <= theta")
            if cand_best is None:
                return report_from_exponent(0.0, "sublevel", converged=False,
                                            exactness=exactness,
                                            notes="zero gradient at every candidate")
            dist = DistanceResult(cand_best[0],
                                  cand_best[2] / max(psi(cand_best[2]), 1e-300),
                                  cand_best[1], True,
                                  degenerate=math.isinf(cand_best[0]))
        else:
            body = SmoothSublevel(f, grad, theta, interior_point=interior_point)
            body._require_dim(mean)
            dist = normal_distance(psi, mean, body, seed=seed)
        if best is None or dist.value < best.value:
            best = dist
    return _distance_report(best, "sublevel", exactness=exactness)


def orthant_bound(margins, diameter_specs, sample_counts) -> BoundReport:
    """Per-coordinate union-style bound
    1 - prod_n (1 - exp(-2 M_n (alpha_n)_+^2 / D_n^2)); the comparison
    baseline that degrades as the dimension grows."""
    alpha = as_vector(margins, name="margins")
    diameters = np.array([d.diameter if isinstance(d, DiameterSpec) else float(d)
                          for d in diameter_specs])
    if diameters.size != alpha.size:
        raise GeometryError("margins and diameters must align")
    M = as_vector(sample_counts, dim=alpha.size, name="sample counts")
    if np.any(M < 1):
        raise GeometryError("sample counts must be >= 1")
    if np.any(diameters < 0):
        raise GeometryError("diameters must be nonnegative")

    log_one_minus = 0.0  # log prod (1 - exp(exponent_n))
    for a, D, m in zip(alpha, diameters, M):
        gap = max(float(a), 0.0)
        if D == 0.0:
            exp_n = -math.inf if gap > 0 else 0.0
        else:
            exp_n = -2.0 * m * gap**2 / D**2
        if exp_n >= 0.0:
            log_one_minus = -math.inf  # a factor vanishes, bound is 1
            break
        log_one_minus += math.log1p(-math.exp(exp_n))
    value = -math.expm1(log_one_minus) if math.isfinite(log_one_minus) else 1.0
    value = min(max(value, 0.0), 1.0)
    exponent = math.log(value) if value > 0 else -math.inf
    return BoundReport(value=value, exponent=exponent, method="orthant",
                       exactness="upper-bound")
