"""JSON codecs and schema validation for problem descriptions and reports.

Scenario payloads are validated against ``schemas/scenario.schema.json``
(unknown fields rejected) before dispatch; emitted reports validate against
``schemas/report.schema.json``.  Infinities are encoded as JSON null with
the surrounding flags (``degenerate``, notes) carrying the meaning.
"""

from __future__ import annotations

import json
import math
from importlib import resources

import jsonschema
import numpy as np

from . import verification as ver
from .chernoff import BoundReport, Witness
from .concentration import CuboidModel, EmpiricalMeanModel, GaussianFamily
from .geometry import (
    Ball,
    Box,
    EuclideanPsi,
    GeometryError,
    HalfSpace,
    HPolytope,
    MaxOfQuadraticsPsi,
    PointCloudHull,
    WeightedQuadraticPsi,
)


class ValidationError(ValueError):
    """Scenario or report payload failed schema validation."""


_SCHEMAS = {}


def load_schema(name):
    if name not in _SCHEMAS:
        text = resources.files("normconc.schemas").joinpath(f"{name}.schema.json").read_text()
        _SCHEMAS[name] = json.loads(text)
    return _SCHEMAS[name]


def validate(payload, schema_name):
    schema = load_schema(schema_name)
    validator = jsonschema.Draft202012Validator(schema)
    best = jsonschema.exceptions.best_match(validator.iter_errors(payload))
    if best is not None:
        path = "/".join(str(p) for p in best.absolute_path) or "<root>"
        message = best.message
        if len(message) > 300:
            message = message[:300] + "..."
        raise ValidationError(f"invalid payload at {path}: {message}")
    return payload


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def psi_from_json(payload):
    variant = payload["variant"]
    if variant == "euclidean":
        return EuclideanPsi()
    if variant == "weighted_quadratic":
        return WeightedQuadraticPsi(np.asarray(payload["matrix"], dtype=float))
    if variant == "max_of_quadratics":
        return MaxOfQuadraticsPsi([np.asarray(m, dtype=float) for m in payload["matrices"]])
    raise ValidationError(f"unknown psi variant {variant!r}")


def set_from_json(payload):
    variant = payload["variant"]
    if variant == "ball":
        return Ball(payload["center"], payload["radius"])
    if variant == "box":
        return Box(payload["lower"], payload["upper"])
    if variant == "point_cloud_hull":
        return PointCloudHull(payload["points"])
    if variant == "finite_set":
        return np.asarray(payload["points"], dtype=float)
    if variant == "half_space":
        return HalfSpace(point=payload["point"], normal=payload["normal"])
    if variant == "h_polytope":
        return HPolytope([HalfSpace(point=h["point"], normal=h["normal"])
                          for h in payload["halfspaces"]])
    raise ValidationError(f"unknown set variant {variant!r}")


def model_from_json(payload):
    kind = payload["type"]
    if kind == "gaussian_family":
        return GaussianFamily(tuple((np.asarray(m["mean"], dtype=float),
                                     np.asarray(m["covariance"], dtype=float))
                                    for m in payload["members"]))
    if kind == "cuboid":
        return CuboidModel(means=payload["means"],
                           interval_lengths=payload["interval_lengths"])
    if kind == "empirical_mean":
        return EmpiricalMeanModel(means=payload["means"], diameters=payload["diameters"],
                                  sample_counts=payload["sample_counts"])
    if kind == "psi":
        return psi_from_json(payload["psi"]), np.asarray(payload["mean"], dtype=float)
    raise ValidationError(f"unknown model type {kind!r}")


def sampler_from_json(payload, *, default_seed=0, sample_count=None):
    variant = payload["variant"]
    seed = int(payload.get("seed", default_seed))
    count = int(sample_count if sample_count is not None else payload["sample_count"])
    if variant == "product_uniform":
        return ver.ProductUniform(seed=seed, sample_count=count,
                                  lower=tuple(payload["lower"]), upper=tuple(payload["upper"]))
    if variant == "hamming_uniform":
        return ver.HammingUniform(seed=seed, sample_count=count,
                                  n_coordinates=int(payload["n_coordinates"]))
    if variant == "gaussian":
        return ver.GaussianSampler(seed=seed, sample_count=count,
                                   mean=tuple(payload["mean"]),
                                   covariance=tuple(map(tuple, payload["covariance"])))
    if variant == "product_two_point":
        return ver.ProductTwoPoint(seed=seed, sample_count=count, a=tuple(payload["a"]),
                                   b=tuple(payload["b"]), q=tuple(payload["q"]))
    if variant == "empirical_mean":
        return ver.EmpiricalMeanSampler(seed=seed, sample_count=count, a=tuple(payload["a"]),
                                        b=tuple(payload["b"]), q=tuple(payload["q"]),
                                        counts=tuple(payload["counts"]))
    raise ValidationError(f"unknown sampler variant {variant!r}")


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _num(x):
    """Encode a float, mapping non-finite values to null."""
    x = float(x) + 0.0  # normalize -0.0
    return x if math.isfinite(x) else None


def _vec(v):
    return None if v is None else [float(t) for t in np.asarray(v, dtype=float)]


def witness_to_json(w: Witness | None):
    if w is None:
        return None
    return {
        "normal": _vec(w.normal),
        "point": _vec(w.point),
        "s": None if w.s is None else _num(w.s),
        "distance": None if w.distance is None else _num(w.distance),
    }


def bound_report_to_json(report: BoundReport):
    return {
        "kind": "bound_report",
        "value": float(report.value),
        "exponent": _num(report.exponent),
        "method": report.method,
        "converged": bool(report.converged),
        "degenerate": bool(report.degenerate),
        "exactness": report.exactness,
        "notes": report.notes,
        "witness": witness_to_json(report.witness),
    }


def verdict_to_json(verdict, name=None):
    payload = {
        "kind": "verify_report",
        "passed": bool(verdict.passed),
        "estimate": float(verdict.estimate),
        "standard_error": float(verdict.standard_error),
        "bound_value": float(verdict.bound_value),
        "bound_exponent": _num(verdict.bound_exponent),
        "slack": float(verdict.slack),
        "sample_count": int(verdict.sample_count),
        "notes": verdict.notes,
    }
    if name is not None:
        payload["name"] = name
    return payload


def sharpness_to_json(report):
    return {
        "kind": "sharpness_report",
        "verdict": report.verdict,
        "interior_ball_radius": _num(report.interior_ball_radius),
        "curvature_eigenvalues": [_num(v) for v in report.curvature_eigenvalues],
        "eigenvalue_threshold": float(report.eigenvalue_threshold),
        "log_gap": _num(report.log_gap),
        "witness_point": _vec(report.witness_point),
        "witness_normal": _vec(report.witness_normal),
        "notes": report.notes,
    }


def allocation_to_json(allocation, report: BoundReport):
    return {
        "kind": "allocation_report",
        "allocation": [int(m) for m in np.asarray(allocation)],
        "bound": float(report.value),
        "exponent": _num(report.exponent),
    }


def dumps(payload):
    """Deterministic JSON text: sorted keys, shortest round-trip floats."""
    return json.dumps(payload, sort_keys=True, allow_nan=False)
