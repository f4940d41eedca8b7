import numpy as np
import pytest

import cavity_packets as cp
from cavity_packets.errors import GridTooSmall
from cavity_packets.model import Tls, basis_state, to_density
from conftest import coherent_density


def test_photon_distribution_pure_superposition():
    psi = (basis_state(Tls.G, 0, 8) + basis_state(Tls.X, 3, 8)) / np.sqrt(2)
    pn = cp.photon_distribution(psi).probs
    assert pn[0] == pytest.approx(0.5) and pn[3] == pytest.approx(0.5)
    assert pn.sum() == pytest.approx(1.0, abs=1e-12)

    assert cp.photon_distribution(basis_state(Tls.G, 0, 8)).probs[0] == 1.0


def test_photon_distribution_mixed():
    rho = 0.5 * to_density(basis_state(Tls.G, 1, 8)) \
        + 0.5 * to_density(basis_state(Tls.X, 1, 8))
    pn = cp.photon_distribution(rho).probs
    assert pn[1] == pytest.approx(1.0, abs=1e-12)


def test_photon_distribution_matches_density_route():
    rng = np.random.default_rng(7)
    psi = rng.normal(size=18) + 1j * rng.normal(size=18)
    psi /= np.linalg.norm(psi)
    p1 = cp.photon_distribution(psi).probs
    p2 = cp.photon_distribution(to_density(psi)).probs
    np.testing.assert_allclose(p1, p2, atol=1e-12)


def test_photon_distribution_clamps_roundoff_only():
    rho = np.diag(np.array([1.0, 0.0, -5e-13, 0.0], dtype=complex))
    pn = cp.photon_distribution(rho).probs
    assert pn[1] == 0.0
    rho_bad = np.diag(np.array([1.0, 0.0, -1e-9, 0.0], dtype=complex))
    with pytest.raises(ValueError):
        cp.photon_distribution(rho_bad)


def test_mean_photon_number():
    assert cp.mean_photon_number(basis_state(Tls.G, 5, 10)) == 5.0
    assert cp.mean_photon_number(basis_state(Tls.G, 0, 10)) == 0.0
    amps = cp.coherent_amplitudes(2.0, 40)
    psi = np.zeros(82, dtype=complex)
    psi[0::2] = amps
    assert cp.mean_photon_number(psi) == pytest.approx(4.0, abs=1e-6)


def test_reduce_photonic():
    rho = to_density(basis_state(Tls.G, 2, 6))
    ph = cp.reduce_photonic(rho)
    assert ph[2, 2] == 1.0 and np.count_nonzero(ph) == 1

    # TLS labels distinguish the branches: no photonic coherence survives
    psi = (basis_state(Tls.G, 0, 6) + basis_state(Tls.X, 1, 6)) / np.sqrt(2)
    ph = cp.reduce_photonic(to_density(psi))
    np.testing.assert_allclose(np.diag(ph), [0.5, 0.5, 0, 0, 0, 0, 0], atol=1e-12)
    assert abs(ph[0, 1]) < 1e-12

    # product state |+> x coherent leaves the photonic state untouched
    amps = cp.coherent_amplitudes(1.2, 24)
    psi = cp.lds_branch_state(+1, amps)
    np.testing.assert_allclose(cp.reduce_photonic(to_density(psi)),
                               np.outer(amps, amps.conj()), atol=1e-12)
    tr = np.trace(cp.reduce_photonic(to_density(psi)))
    assert tr.real == pytest.approx(1.0, abs=1e-12)


def test_wigner_vacuum_gaussian():
    rho = coherent_density(0.0, 8)
    axis = np.linspace(-3, 3, 61)
    wg = cp.wigner(rho, axis, axis)
    ref = 2 / np.pi * np.exp(-2 * (axis[:, None] ** 2 + axis[None, :] ** 2))
    assert np.max(np.abs(wg.values - ref)) < 1e-4
    assert wg.values[30, 30] == pytest.approx(2 / np.pi, abs=1e-10)


def test_wigner_fock1_negative_at_origin():
    rho = to_density(cp.coherent_amplitudes(0.0, 8))  # placeholder shape
    rho[:] = 0
    rho[1, 1] = 1.0
    axis = np.linspace(-3, 3, 41)
    wg = cp.wigner(rho, axis, axis)
    assert wg.values[20, 20] == pytest.approx(-2 / np.pi, abs=1e-10)


def test_wigner_coherent_displacement_covariance():
    rho = coherent_density(2.0, 40)
    axis = np.linspace(-6, 6, 121)
    wg = cp.wigner(rho, axis, axis)
    z = axis[:, None] + 1j * axis[None, :]
    ref = 2 / np.pi * np.exp(-2 * np.abs(z - 2.0) ** 2)
    assert np.max(np.abs(wg.values - ref)) < 1e-4
    i = np.argmin(np.abs(axis - 2.0))
    j = np.argmin(np.abs(axis))
    assert wg.values[i, j] == pytest.approx(2 / np.pi, abs=1e-4)


def test_wigner_normalization():
    wg = cp.wigner(coherent_density(1.0, 30), np.linspace(-6, 6, 101),
                   np.linspace(-6, 6, 101))
    assert wg.normalization() == pytest.approx(1.0, abs=2e-2)


def test_wigner_grid_too_small():
    rho = coherent_density(3.0, 60)  # populated past n = 18
    with pytest.raises(GridTooSmall):
        cp.wigner(rho, np.linspace(-3, 3, 21), np.linspace(-3, 3, 21))


def test_wigner_symmetrization_invariance():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    axis = np.linspace(-4, 4, 31)
    w1 = cp.wigner(rho, axis, axis).values
    w2 = cp.wigner(0.5 * (rho + rho.conj().T), axis, axis).values
    assert np.max(np.abs(w1 - w2)) < 1e-10


def test_wigner_marginal_matches_quadrature_distribution():
    # integrating W over Im z gives the Re-z quadrature density; for the
    # vacuum and a displaced vacuum that is sqrt(2/pi) exp(-2 (x - Re a)^2)
    axis = np.linspace(-6, 6, 241)
    for alpha in (0.0, 1.5):
        wg = cp.wigner(coherent_density(alpha, 40), axis, axis)
        marginal = wg.values.sum(axis=1) * (axis[1] - axis[0])
        ref = np.sqrt(2 / np.pi) * np.exp(-2 * (axis - alpha) ** 2)
        assert np.max(np.abs(marginal - ref)) < 1e-3


def test_mean_energy_consistency():
    params = cp.SystemParams(f_drive=1.5, delta=0.3, dxl=0.1, n_max=14)
    ops = cp.build_operators(params)
    rng = np.random.default_rng(11)
    psi = rng.normal(size=params.dim) + 1j * rng.normal(size=params.dim)
    psi /= np.linalg.norm(psi)
    direct = np.real(np.vdot(psi, ops.hamiltonian @ psi))
    assert cp.mean_energy(params, psi) == pytest.approx(direct, abs=1e-12)
    assert cp.mean_energy(params, to_density(psi)) == pytest.approx(direct, abs=1e-12)
