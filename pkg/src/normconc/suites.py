"""Fixed Monte Carlo regression suite: (sampler, set, bound) scenarios whose
bounds must all survive empirical verification.

Scenario payloads use the CLI JSON format, so the suite can be run through
``normconc verify --suite regression`` as well as from the tests.  Seeds are
fixed per scenario; sample counts default to 10^6 and may be scaled down for
quick runs (determinism checks) without touching the scenario structure.
"""

from __future__ import annotations

import math

import numpy as np

from . import serialization as ser
from .concentration import (
    CuboidModel,
    EmpiricalMeanModel,
    GaussianFamily,
    cuboid_bound,
    empirical_mean_bound,
    gaussian_family_bound,
    portmanteau_bound,
)
from .verification import Verdict, verify_bound


def _vec(*xs):
    return [float(x) for x in xs]


def regression_scenarios(sample_count=10**6):
    """The named scenario list; every entry is a schema-valid verify
    scenario."""
    scenarios = []
    seed = 1000

    def add(name, model, set_payload, sampler):
        nonlocal seed
        sampler = dict(sampler)
        sampler.setdefault("seed", seed)
        sampler["sample_count"] = int(sample_count)
        scenarios.append({
            "kind": "verify",
            "name": name,
            "model": model,
            "set": set_payload,
            "sampler": sampler,
        })
        seed += 1

    # Gaussian half-spaces at separations 0.5, 1, 2 (unit variance, N = 1).
    for r in (0.5, 1.0, 2.0):
        add(f"gaussian-halfspace-r{r}",
            {"type": "gaussian_family",
             "members": [{"mean": [0.0], "covariance": [[1.0]]}]},
            {"variant": "half_space", "point": [-r], "normal": [1.0]},
            {"variant": "gaussian", "mean": [0.0], "covariance": [[1.0]]})

    # The same separations along a diagonal in N = 3.
    u = 1.0 / math.sqrt(3.0)
    for r in (0.5, 1.0, 2.0):
        add(f"gaussian3-halfspace-r{r}",
            {"type": "gaussian_family",
             "members": [{"mean": [0.0, 0.0, 0.0],
                          "covariance": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]}]},
            {"variant": "half_space", "point": _vec(-r * u, -r * u, -r * u),
             "normal": _vec(u, u, u)},
            {"variant": "gaussian", "mean": [0.0, 0.0, 0.0],
             "covariance": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]})

    # Anisotropic Gaussian against a half-space and a ball.
    aniso = [[2.0, 0.5], [0.5, 1.0]]
    add("gaussian-aniso-halfspace",
        {"type": "gaussian_family", "members": [{"mean": [0.0, 0.0], "covariance": aniso}]},
        {"variant": "half_space", "point": [-2.0, 0.0], "normal": [1.0, 0.2]},
        {"variant": "gaussian", "mean": [0.0, 0.0], "covariance": aniso})
    add("gaussian-aniso-ball",
        {"type": "gaussian_family", "members": [{"mean": [0.0, 0.0], "covariance": aniso}]},
        {"variant": "ball", "center": [4.0, 0.0], "radius": 1.0},
        {"variant": "gaussian", "mean": [0.0, 0.0], "covariance": aniso})

    # Two-member family: the wider member's law is sampled, the bound must
    # still cover it.
    fam = {"type": "gaussian_family",
           "members": [{"mean": [0.0, 0.0], "covariance": [[1.0, 0.0], [0.0, 1.0]]},
                       {"mean": [0.0, 0.0], "covariance": [[4.0, 0.0], [0.0, 4.0]]}]}
    add("gaussian-family-halfspace", fam,
        {"variant": "half_space", "point": [-2.0, 0.0], "normal": [1.0, 0.0]},
        {"variant": "gaussian", "mean": [0.0, 0.0], "covariance": [[4.0, 0.0], [0.0, 4.0]]})
    add("gaussian-family-ball", fam,
        {"variant": "ball", "center": [5.0, 0.0], "radius": 1.0},
        {"variant": "gaussian", "mean": [0.0, 0.0], "covariance": [[4.0, 0.0], [0.0, 4.0]]})
    add("gaussian2-ball",
        {"type": "gaussian_family",
         "members": [{"mean": [0.0, 0.0], "covariance": [[1.0, 0.0], [0.0, 1.0]]}]},
        {"variant": "ball", "center": [3.0, 0.0], "radius": 1.0},
        {"variant": "gaussian", "mean": [0.0, 0.0], "covariance": [[1.0, 0.0], [0.0, 1.0]]})

    # Uniform cube: balls near a corner, several dimensions and radii.
    for N, radius in ((2, 0.2), (2, 0.4), (3, 0.3), (3, 0.5), (5, 0.4), (5, 0.7)):
        add(f"unitcube{N}-corner-ball-r{radius}",
            {"type": "cuboid", "means": [0.5] * N, "interval_lengths": [1.0] * N},
            {"variant": "ball", "center": [0.0] * N, "radius": radius},
            {"variant": "product_uniform", "lower": [0.0] * N, "upper": [1.0] * N})

    # Uniform cube: corner boxes.
    for N, side in ((2, 0.25), (4, 0.3)):
        add(f"unitcube{N}-corner-box-{side}",
            {"type": "cuboid", "means": [0.5] * N, "interval_lengths": [1.0] * N},
            {"variant": "box", "lower": [0.0] * N, "upper": [side] * N},
            {"variant": "product_uniform", "lower": [0.0] * N, "upper": [1.0] * N})

    # Hamming cube half-spaces; the first is at Euclidean normal distance 1.
    for N in (2, 5, 10):
        add(f"hamming{N}-halfspace-first-coordinate",
            {"type": "cuboid", "means": [0.0] * N, "interval_lengths": [2.0] * N},
            {"variant": "half_space", "point": _vec(-1.0, *([0.0] * (N - 1))),
             "normal": _vec(1.0, *([0.0] * (N - 1)))},
            {"variant": "hamming_uniform", "n_coordinates": N})
    for N in (4, 8):
        add(f"hamming{N}-halfspace-majority",
            {"type": "cuboid", "means": [0.0] * N, "interval_lengths": [2.0] * N},
            {"variant": "half_space", "point": _vec(-N / 2.0 / N, *([-N / 2.0 / N] * (N - 1))),
             "normal": [1.0] * N},
            {"variant": "hamming_uniform", "n_coordinates": N})

    # A nonconvex target: two far corners of the Hamming cube, bounded
    # through their convex hull.
    add("hamming6-two-corners",
        {"type": "cuboid", "means": [0.0] * 6, "interval_lengths": [2.0] * 6},
        {"variant": "finite_set",
         "points": [[-1.0] * 6, _vec(-1.0, -1.0, -1.0, -1.0, -1.0, 1.0)]},
        {"variant": "hamming_uniform", "n_coordinates": 6})

    # Quadratic-form sublevel sets: balls of radius sqrt(2 theta) around the
    # all-halves corner for X uniform on the centered unit cube.
    for theta in (0.125, 0.25):
        radius = math.sqrt(2.0 * theta)
        add(f"quadratic-form-N10-theta{theta}",
            {"type": "cuboid", "means": [0.0] * 10, "interval_lengths": [1.0] * 10},
            {"variant": "ball", "center": [0.5] * 10, "radius": radius},
            {"variant": "product_uniform", "lower": [-0.5] * 10, "upper": [0.5] * 10})

    # Asymmetric two-point coordinates under the cuboid bound.
    for N, q in ((2, 0.3), (3, 0.5), (4, 0.2)):
        mean = q  # atoms {0, 1}
        add(f"twopoint{N}-q{q}-halfspace",
            {"type": "cuboid", "means": [mean] * N, "interval_lengths": [1.0] * N},
            {"variant": "half_space",
             "point": _vec(mean - 0.25, *([0.0] * (N - 1))),
             "normal": _vec(1.0, *([0.0] * (N - 1)))},
            {"variant": "product_two_point", "a": [0.0] * N, "b": [1.0] * N,
             "q": [q] * N})

    # Empirical-mean vectors: coordinate n averages counts[n] two-point draws.
    add("empirical-mean-1d",
        {"type": "empirical_mean", "means": [0.5], "diameters": [1.0],
         "sample_counts": [100]},
        {"variant": "half_space", "point": [0.4], "normal": [1.0]},
        {"variant": "empirical_mean", "a": [0.0], "b": [1.0], "q": [0.5],
         "counts": [100]})
    add("empirical-mean-2d",
        {"type": "empirical_mean", "means": [0.5, 0.3], "diameters": [1.0, 1.0],
         "sample_counts": [100, 50]},
        {"variant": "half_space", "point": [0.35, 0.15], "normal": [1.0, 1.0]},
        {"variant": "empirical_mean", "a": [0.0, 0.0], "b": [1.0, 1.0],
         "q": [0.5, 0.3], "counts": [100, 50]})
    add("empirical-mean-3d-ball",
        {"type": "empirical_mean", "means": [0.5, 0.5, 0.5],
         "diameters": [1.0, 1.0, 1.0], "sample_counts": [80, 80, 80]},
        {"variant": "ball", "center": [0.2, 0.2, 0.2], "radius": 0.1},
        {"variant": "empirical_mean", "a": [0.0, 0.0, 0.0], "b": [1.0, 1.0, 1.0],
         "q": [0.5, 0.5, 0.5], "counts": [80, 80, 80]})

    return scenarios


def bound_for_scenario(scenario, *, seed=0):
    """Compute the bound a verify scenario certifies."""
    model = ser.model_from_json(scenario["model"])
    target = ser.set_from_json(scenario["set"])
    if isinstance(model, GaussianFamily):
        return gaussian_family_bound(model, target, seed=seed)
    if isinstance(model, CuboidModel):
        return cuboid_bound(model, target, seed=seed)
    if isinstance(model, EmpiricalMeanModel):
        return empirical_mean_bound(model, target, seed=seed)
    psi, mean = model
    return portmanteau_bound(psi, mean, target, seed=seed)


def run_verify_scenario(scenario, *, sample_count=None, default_seed=0):
    """Compute the scenario's bound, then test it against the sampler."""
    bound = bound_for_scenario(scenario, seed=int(scenario.get("seed", default_seed)))
    sampler = ser.sampler_from_json(scenario["sampler"], default_seed=default_seed,
                                    sample_count=sample_count)
    target = ser.set_from_json(scenario["set"])
    verdict = verify_bound(sampler, target, bound,
                           notes=scenario.get("name", ""))
    return verdict, bound
