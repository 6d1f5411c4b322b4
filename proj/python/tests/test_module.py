import json
import math

import pytest

import krein


def test_special_functions():
    assert krein.bessel_k0(1.0) == pytest.approx(0.42102443824070833, rel=1e-13)
    assert krein.digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-13)
    w = krein.lambert_w0(2.0)
    assert w * math.exp(w) == pytest.approx(2.0, rel=1e-14)


def test_exact_pair():
    r = krein.exact_two_center_1d(1.0, 12.0)
    assert r["splitting"] == pytest.approx(6.1442124006464763783e-6, rel=1e-9)
    assert r["e_plus"] > r["e_minus"]


def test_model_roundtrip():
    cfg = {"family": "Point3D", "centers": [[0, 0, 0], [6, 0, 0]], "binding_energies": [-1, -0.5]}
    m = krein.model(cfg)
    assert m.size == 2
    phi = m.phi(-0.8)
    assert phi[0][1] == phi[1][0] < 0
    states = m.bound_states()
    assert len(states) == 2
    s = m.perturbative_shift(0)
    assert s < 0


def test_commands():
    cfg = {"family": "Point1D", "centers": [[-5], [5]], "couplings_lambda": [1, 1], "degenerate": True,
           "sweep": {"variable": "a", "from": 4, "to": 8, "steps": 3}}
    assert krein.solve(cfg)["command"] == "solve"
    assert krein.sweep(cfg).startswith("a,delta_exact")
    assert krein.sweep(json.dumps(cfg)) == krein.sweep(cfg)


def test_config_error():
    with pytest.raises(krein.ConfigError):
        krein.solve({"family": "Point3D", "bogus": 1})
