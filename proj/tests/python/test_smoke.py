import cmath
import math

import numpy as np
import pytest

import resonance


def test_version():
    assert resonance.__version__


def test_transforms_round_trip():
    rng = np.random.default_rng(0)
    z = rng.normal(size=32) + 1j * rng.normal(size=32)
    assert np.allclose(resonance.to_physical(resonance.to_spectral(z)), z, atol=1e-13)


def test_dispersion():
    d = resonance.dispersion(1, truncation=100000)
    assert d["omega1"] == pytest.approx(1.0)
    assert d["omega2"] == pytest.approx(-0.5 - math.pi**2 / 2, abs=1e-3)


def test_single_harmonic_solver():
    n = 16
    a = np.zeros(n, dtype=complex)
    a[1] = 1.0
    out = resonance.run_dqs(a, mu=1.0, dt=1e-3, tau_end=0.5, snapshot_taus=[0.0, 0.5])
    exact = resonance.single_harmonic(1, 1.0, 1.0, 0.5)
    last = resonance.to_spectral(out["a"][-1])
    assert abs(last[1] - exact) < 1e-5
    assert out["manifest"]["status"] == "ok"


def test_galerkin_matches_single_harmonic():
    r = resonance.galerkin_oracle([3], np.array([0.4 + 0.1j]), 1.0, 1.0, 0.3)
    assert abs(r[0] - resonance.single_harmonic(3, 0.4 + 0.1j, 1.0, 0.3)) < 1e-10


def test_traveling_wave():
    phi, a = resonance.traveling_wave(1.0, 0.5)
    assert phi - math.sin(phi) == pytest.approx(0.25, abs=1e-12)
    assert a == pytest.approx(1 - cmath.exp(-1j * phi))


def test_reconstruct_extract():
    a = np.zeros(64, dtype=complex)
    a[1] = 1.0
    u, v = resonance.reconstruct_mrs(a, 0.05, 0.0)
    x = 2 * np.pi * np.arange(64) / 64
    assert np.allclose(u, 0.1 * np.cos(x), atol=1e-13)
    assert np.allclose(resonance.extract_amplitude(u, v, 0.05, 0.0), a, atol=1e-13)


def test_normalize():
    n = resonance.normalize(0.01, 1.4, math.sqrt(1e-6 / 2))
    assert n["mu"] == pytest.approx(1.0)
    assert resonance.asyeq_coefficient(1.4) == pytest.approx(0.96)


def test_config_errors():
    with pytest.raises(ValueError, match="cfl out of range"):
        resonance.parse_config("experiment = mrs-front\ncfl = 1.5\n")
    assert resonance.parse_config("experiment = two-harmonic\n")["mu"] == 1.0


def test_run_experiment(tmp_path):
    r = resonance.run_experiment(
        "experiment = two-harmonic\nn = 32\ndt = 1e-3\ntau_end = 0.01\nsnapshots = 2\n", str(tmp_path)
    )
    assert r["manifest"]["status"] == "ok"
    assert (tmp_path / "manifest.txt").exists()
    assert r["runs"]["dqs"]["a"].shape == (2, 32)
