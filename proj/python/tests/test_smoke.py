"""End-to-end smoke tests for the Python module.

Covers map construction, orbit enumeration, symbolic model building,
pressure/dimension reports, and the rigidity pipeline, with values pinned
against the C++ test suite.
"""

import math
import os

import pytest

import holorigid as hr

LOG2 = math.log(2.0)


def data_path(name):
    root = os.environ.get(
        "HOLORIGID_DATA_DIR",
        os.path.join(os.path.dirname(__file__), "..", "..", "data"),
    )
    return os.path.join(root, name)


def test_version_and_exceptions_exposed():
    assert hr.__version__
    for name in (
        "InputError",
        "UncertifiedModelError",
        "DegenerateMapError",
        "BridgeNotFoundError",
        "GraphMismatchError",
    ):
        assert issubclass(getattr(hr, name), Exception)


def test_map_engine_basics():
    f = hr.quadratic_map(0.25 + 0j)
    assert f.degree == 2
    assert f.critical_point == 0j
    assert f.eval(0.5 + 0j) == 0.5 + 0j  # fixed point of z^2 + 1/4
    assert f.deriv(0.5 + 0j) == 1.0 + 0j
    assert f.eval(100 + 0j) is None  # outside the branch domain

    # power-like implies the weaker chebyshev condition, so both flags set
    flags = hr.classify_degenerate(hr.quadratic_map(0j))
    assert flags == {"chebyshev": True, "power_like": True}
    flags = hr.classify_degenerate(hr.quadratic_map(-2 + 0j))
    assert flags["chebyshev"] and not flags["power_like"]
    flags = hr.classify_degenerate(hr.quadratic_map(1j))
    assert not flags["chebyshev"] and not flags["power_like"]

    points, escaped = hr.critical_orbit(hr.quadratic_map(3 + 0j), 6)
    assert escaped
    points, escaped = hr.critical_orbit(hr.quadratic_map(1j), 20)
    assert not escaped and len(points) == 21


def test_map_json_round_trip(tmp_path):
    f = hr.quadratic_map(1j)
    path = str(tmp_path / "map.json")
    hr.save_map(f, path)
    g = hr.load_map(path)
    assert g.to_json() == f.to_json()


def test_orbits_and_spectrum():
    f = hr.quadratic_map(0j)
    fixed = hr.find_periodic(f, 1)
    assert sorted(o.multiplier_abs for o in fixed) == [0.0, 2.0]

    spec = hr.multiplier_spectrum(f, 3)
    for entry in spec:
        # |D(z^2)^n| = 2^n on the unit circle
        assert entry["multiplier_abs"] == pytest.approx(
            2.0 ** entry["period"], abs=1e-9
        )
        assert len(entry["word"]) == entry["period"]

    with pytest.raises(hr.InputError):
        hr.find_periodic(f, 0)


def test_affine_conjugation_preserves_multipliers():
    f = hr.quadratic_map(1j)
    g = hr.affine_conjugate(f, 2 + 0j, 0j)
    sf = [e["multiplier_abs"] for e in hr.multiplier_spectrum(f, 3)]
    sg = [e["multiplier_abs"] for e in hr.multiplier_spectrum(g, 3)]
    assert sf == pytest.approx(sg, abs=1e-8)


def test_anchored_model_build(tmp_path):
    f = hr.quadratic_map(0j)
    anchors = hr.select_anchor_orbits(f)
    assert [o.period for o in anchors] == [1, 2]
    assert not any(o.post_critical for o in anchors)

    plan, model = hr.build_bn(f, anchors, 0.15)
    assert len(plan["bridges"]) == 2
    assert model.states == 11 and model.transitions == 15
    assert model.certified
    assert model.kappa == pytest.approx(1.795936, abs=1e-5)
    assert model.is_transitive()

    path = str(tmp_path / "model.json")
    hr.save_model(model, path)
    again = hr.load_model(path)
    assert again.to_json() == model.to_json()


def test_grid_model_build():
    model = hr.build_an(hr.quadratic_map(0j), 0.3, 0.08, 14)
    assert model.states == 100
    assert model.certified and model.is_transitive()


def test_pressure_entropy_dimension():
    m = hr.make_full_shift([2.0, 2.0])
    lo, hi = hr.pressure(m, 0.0, order=12)
    assert lo == pytest.approx(LOG2, abs=1e-12)
    assert hi == pytest.approx(LOG2, abs=1e-12)
    lo, hi = hr.pressure(m, 1.0, order=12)
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hr.entropy(m) == pytest.approx(LOG2, abs=1e-9)

    dlo, dhi = hr.bowen_dimension(m, 12, 1e-8)
    assert dlo <= dhi
    assert dlo == pytest.approx(1.0, abs=1e-6)

    report = hr.dimension_report(hr.make_full_shift([2.0, 4.0]), 12, 1e-8)
    assert report["entropy"] == pytest.approx(LOG2, abs=1e-10)
    assert report["hd_max_entropy"]["mid"] == pytest.approx(2.0 / 3.0, abs=1e-9)
    assert report["bowen_dim"]["lower"] > report["hd_max_entropy"]["upper"]
    assert report["equality_case"] is False

    uniform = hr.dimension_report(m, 12, 1e-8)
    assert uniform["equality_case"] is True


def test_cohomology_and_linearity():
    assert hr.livshitz_test(hr.make_full_shift([2.0, 2.0]))["kind"] == "cohomologous"
    v = hr.livshitz_test(hr.make_full_shift([2.0, 4.0]))
    assert v["kind"] == "not_cohomologous"
    assert v["residual"] > 0.3
    assert v["witness"] is not None

    v = hr.constant_multiplier_test([(1, 2.0), (2, 4.0), (3, 8.0)], 1e-6)
    assert v["kind"] == "linear" and v["lambda"] == pytest.approx(2.0, abs=1e-9)
    assert hr.constant_multiplier_test([(1, 2.0), (1, 4.0)], 1e-6)["kind"] == "non_linear"

    v = hr.affine_structure_test(hr.make_golden_mean(2.0, 3.0))
    assert v["kind"] == "cohomologous" and v["residual"] <= 1e-9


def test_pair_comparison():
    v = hr.pair_and_compare(hr.make_full_shift([2.0, 4.0]), hr.make_full_shift([2.0, 5.0]))
    assert v["kind"] == "multipliers_diverge"
    assert v["residual"] == pytest.approx(math.log(5.0 / 4.0), abs=1e-9)

    g = hr.make_golden_mean(2.0, 3.0)
    assert hr.pair_and_compare(g, g)["kind"] == "multipliers_preserved"

    with pytest.raises(hr.GraphMismatchError):
        hr.pair_and_compare(g, hr.make_full_shift([2.0, 2.0]))


def test_rigidity_verdict_conjugate_pair():
    f = hr.load_map(data_path("map_quadratic_i.json"))
    g = hr.load_map(data_path("map_quadratic_i_rescaled.json"))
    report = hr.rigidity_verdict(f, g)
    assert report["certificate"] == "CONFORMAL_CONJUGACY_CRITERIA_MET"
    assert report["criteria_met"] is True
    assert report["comparison"]["kind"] == "multipliers_preserved"
    assert report["affine_structure_first"]["kind"] == "non_linear"


def test_degenerate_gate():
    with pytest.raises(hr.DegenerateMapError):
        hr.rigidity_verdict(hr.quadratic_map(-2 + 0j), hr.quadratic_map(1j))
