import json
import math

import numpy as np
import pytest

import shadowgeom as sg


def test_cube_basics():
    cube = sg.named_body("cube", 3)
    assert cube.dim == 3
    assert cube.volume == pytest.approx(8.0)
    assert cube.surface_area == pytest.approx(24.0)
    assert cube.vertices.shape == (3, 8)
    assert sg.inradius(cube) == pytest.approx(1.0)
    assert sg.circumradius(cube) == pytest.approx(math.sqrt(3.0))
    assert sg.shadow_surface(cube, np.array([0.0, 0.0, 1.0])) == pytest.approx(8.0)


def test_estimates():
    cube = sg.named_body("cube", 3)
    w = sg.mean_width(cube, samples=5000, seed=1)
    assert abs(w.mean - 1.5) <= 4 * w.stderr
    assert not w.exact
    v1 = sg.quermassintegral(cube, 2, samples=5000)
    assert abs(v1.mean - 2 * math.pi) <= 4 * v1.stderr
    assert float(sg.mean_width(cube, 100, 3)) == sg.mean_width(cube, 100, 3).mean


def test_positions():
    cube = sg.named_body("cube", 3)
    r = sg.minimal_surface_position(cube)
    assert r["partial"] == pytest.approx(6.0)
    assert np.allclose(r["transform"], np.eye(3))
    iso = sg.isotropic_position(sg.named_body("unit-cube", 3))
    assert iso["L_K"] == pytest.approx(12 ** -0.5)
    low = sg.lowner_position(cube)
    assert np.allclose(low["shape"], 3 * np.eye(3), atol=1e-5)


def test_body_from_points_and_json_round_trip():
    pts = np.array([[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]])
    simplex = sg.body_from_points("tetra", pts)
    assert simplex.volume == pytest.approx(1.0 / 6.0)
    again = sg.body_from_json(simplex.to_json())
    assert again.volume == pytest.approx(simplex.volume)


def test_checks_and_suite():
    assert "BALL-EQ" in sg.check_ids()
    r = sg.run_check("T-HYPER-1", "cube", 3)
    assert r["status"] == "pass"
    assert r["lhs"]["value"] == pytest.approx(16.0)
    assert sg.run_check("T-HYPER-2", "simplex", 3)["status"] == "skipped"
    report = sg.run_suite([3], ids=["ALEK", "S-INRADIUS"], samples=2000)
    assert report["summary"]["fail"] == 0
    assert len(report["results"]) == 2 * len(sg.default_corpus(3))


def test_search_and_errors():
    trace = json.loads(sg.extremizer_search("GHP", "perturbed-cube", 3, budget=5))
    ratios = [s["ratio"] for s in trace["trace"]]
    assert ratios == sorted(ratios)
    with pytest.raises(sg.GeometryError):
        sg.named_body("cube", 12)
    with pytest.raises(ValueError):
        sg.run_check("NOPE", "cube", 3)
