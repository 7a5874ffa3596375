import math

import numpy as np
import pytest

import ptcs


def test_spectrum_and_ground_state():
    assert ptcs.energy(0, 0.0) == 1.0
    assert ptcs.energy(2, 0.5) == pytest.approx(12.25)
    x = np.linspace(0.1, 3.0, 7)
    assert np.allclose(ptcs.eigenfunction(0, 0.0, x), math.sqrt(2 / math.pi) * np.sin(x), atol=1e-14)


def test_coherent_state_normalization_and_peak():
    cs = ptcs.CoherentState(q=1.1, p=2.0, nu=1.0)
    x = np.linspace(0.0, math.pi, 20001)
    dens = np.abs(cs(x)) ** 2
    assert np.trapezoid(dens, x) == pytest.approx(1.0, rel=1e-7)
    assert abs(x[np.argmax(dens)] - 1.1) < 1e-3
    assert cs.eigenvalue.imag == 2.0
    assert ptcs.cs_normalization(0.0, math.pi / 2) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-13)


def test_coefficients_and_evolution():
    c = ptcs.cs_coefficients(math.pi / 5, 4.0, nmax=256)
    assert np.sum(np.abs(c) ** 2) == pytest.approx(1.0, abs=1e-8)
    revived = ptcs.evolve(c, 2 * math.pi)
    assert np.allclose(revived, c, atol=1e-10)
    assert abs(ptcs.autocorrelation(c, 0.0)) == pytest.approx(np.sum(np.abs(c) ** 2))


def test_mean_energy_closed_form():
    me = ptcs.mean_energy(math.pi / 5, 4.0)
    assert me["closed_form"] == pytest.approx(16 + 1 / math.sin(math.pi / 5) ** 2)
    assert me["relative_difference"] < 1e-6


def test_quantized_matrices():
    h = ptcs.quantize("classical_hamiltonian", nu=1.0, nmax=8)
    assert np.allclose(h, h.conj().T, atol=1e-10)
    assert np.allclose(np.diag(h).real, [ptcs.energy(n, 1.0) for n in range(9)], rtol=1e-9)
    value, err = ptcs.lower_symbol("momentum", 1.0, -3.5, nu=0.5)
    assert value.real == pytest.approx(-3.5, abs=1e-9)
    assert err >= 0.0


def test_husimi_and_band_ratio():
    rho = ptcs.husimi(1.1, -3.0, q_count=48, p_count=40, nmax=64)
    assert rho.values.shape == (48, 40)
    assert (rho.values >= 0).all()
    i, k = rho.argmax()
    assert abs(rho.q[i] - 1.1) < rho.q[1] - rho.q[0]
    avg = ptcs.time_averaged_husimi(1.1, -3.0, q_count=48, p_count=40, nmax=64)
    e = ptcs.classical_energy(0.0, 1.1, -3.0)
    assert ptcs.trajectory_band_ratio(avg, e) > 1.0
    q, p = ptcs.classical_trajectory(e)
    assert len(q) == len(p) > 100


def test_validation_errors():
    with pytest.raises(ValueError):
        ptcs.CoherentState(q=0.0, p=1.0)
    with pytest.raises(ptcs.ValidationError):
        ptcs.quantize("q:3")


def test_check_suite():
    assert "eigen" in ptcs.suite_names()
    report = ptcs.run_suite("eigen")
    assert report.passed
    assert all(c.passed for c in report.cases)
