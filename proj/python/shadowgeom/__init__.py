"""Shadows, quermassintegrals and classical positions of convex polytopes."""

import json as _json

from ._shadowgeom import (
    Body,
    Estimate,
    GeometryError,
    b_constant,
    body_from_json,
    body_from_points,
    check_ids,
    circumradius,
    default_corpus,
    extremizer_search,
    inradius,
    isotropic_position,
    john_position,
    load_body,
    lowner_position,
    mean_shadow_surface,
    mean_width,
    minimal_surface_position,
    named_body,
    omega,
    p_k,
    quermassintegral,
    run_check,
    shadow_surface,
    vrad,
)
from ._shadowgeom import run_suite as _run_suite


def run_suite(dims, ids=(), seed=0, samples=20000, tol=0.05, jobs=1):
    """Run the check catalog on the default corpus and return the parsed report."""
    return _json.loads(_run_suite(list(dims), list(ids), seed, samples, tol, jobs))


__all__ = [
    "Body",
    "Estimate",
    "GeometryError",
    "b_constant",
    "body_from_json",
    "body_from_points",
    "check_ids",
    "circumradius",
    "default_corpus",
    "extremizer_search",
    "inradius",
    "isotropic_position",
    "john_position",
    "load_body",
    "lowner_position",
    "mean_shadow_surface",
    "mean_width",
    "minimal_surface_position",
    "named_body",
    "omega",
    "p_k",
    "quermassintegral",
    "run_check",
    "run_suite",
    "shadow_surface",
    "vrad",
]
