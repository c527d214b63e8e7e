import json
import math

import pytest

import _core

G = 9.81

RECTANGLE = {
    "contour": [[-1, -0.5], [1, -0.5], [1, 0.5], [-1, 0.5]],
    "density_regions": [
        {"polygon": [[-1, -0.5], [1, -0.5], [1, 0.5], [-1, 0.5]], "rho": 0.5}
    ],
    "depth": {"finite": 1.0},
}

CATAMARAN = {
    "contour": [
        [-2, -1], [-1, -1], [-1, 0.25], [1, 0.25],
        [1, -1], [2, -1], [2, 0.5], [-2, 0.5],
    ],
    "density_regions": [{"polygon": [
        [-2, -1], [-1, -1], [-1, 0.25], [1, 0.25],
        [1, -1], [2, -1], [2, 0.5], [-2, 0.5],
    ], "rho": 4.0 / 7.0}],
    "depth": {"finite": 2.0},
}


def test_version_and_dispersion():
    assert _core.__version__
    k0 = _core.dispersion_root(1.0, 1.0)
    assert abs(k0 * math.tanh(k0) - 1.0) < 1e-12


def test_band_classifier():
    lower = _core.band_classifier(math.pi / 4)
    assert lower["omega_minus"] and not lower["omega_plus"]
    upper = _core.band_classifier(3 * math.pi / 4)
    assert upper["omega_plus"] and not upper["omega_minus"]


def test_rectangle_session():
    s = _core.Session(json.dumps(RECTANGLE))
    geo = s.geometry()
    assert geo["n_parts"] == 1
    assert geo["john_condition"]
    assert geo["symmetric"]
    hyd = s.hydrostatics()
    assert hyd["IM"] == pytest.approx(1.0)
    assert hyd["lambda0"] == pytest.approx(2 * G)
    assert hyd["in_equilibrium"] and hyd["stable"]

    cert = s.certificate(math.sqrt(2.5 * G), 0.1)
    assert cert["applicable_statement"] == "Corollary1"

    rad = s.radiation(math.sqrt(G), k=0.5, hmesh=0.15)
    assert rad["damping"][1][1] > 0
    assert rad["radiated_flux"][1] == pytest.approx(
        G * rad["damping"][1][1], rel=1e-8)

    sc = s.scatter(math.sqrt(G), k=0.5, hmesh=0.15)
    assert abs(sc["reflection"]) <= 1.01
    assert sc["energy_defect"] < 0.05


def test_catamaran_bands_and_certificate():
    s = _core.Session(json.dumps(CATAMARAN))
    geo = s.geometry()
    assert geo["n_parts"] == 2
    assert geo["inner_half_spacing"] == pytest.approx(1.0)
    omega = math.sqrt(0.5 * G)
    band = s.bands(omega, k=0.1)
    assert band["omega_minus"]
    cert = s.certificate(omega, k=0.1, restriction="sway", parity="odd")
    assert cert["applicable_statement"] == "Prop3"
    assert cert["finite_depth_analogue"]


def test_invalid_body_raises():
    bad = {"contour": [[-1, -0.5], [-1, 0.5], [1, 0.5], [1, -0.5]]}  # clockwise
    with pytest.raises(_core.FloatwaveError):
        _core.Session(json.dumps(bad))
    with pytest.raises(_core.FloatwaveError):
        _core.Session("not json")
