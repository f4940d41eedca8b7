import numpy as np
import pytest

import cavity_packets as cp
from cavity_packets.errors import StepUnstable, TruncationOverflow
from cavity_packets.model import Tls, basis_state, flat_index, to_density
from cavity_packets.observables import mean_energy


def test_stability_rule_refuses_large_dt():
    params = cp.SystemParams(f_drive=5.0, delta=0.1, n_max=160)
    limit = cp.stability_limit(params)
    with pytest.raises(StepUnstable):
        cp.evolve_schrodinger(params, cp.prepare_state("bare_ground", 160),
                              cp.TimeGrid(t_final=1.0, dt=2 * limit))


def test_vacuum_rabi_exact(rabi_trajectory):
    traj = rabi_trajectory
    err = np.max(np.abs(traj.mean_n - np.sin(traj.times) ** 2))
    assert err < 1e-6


def test_ground_state_is_stationary():
    params = cp.SystemParams(f_drive=0.0, delta=0.0, n_max=12)
    traj = cp.evolve_schrodinger(params, cp.prepare_state("bare_ground", 12),
                                 cp.TimeGrid(t_final=5.0, dt=1e-3, output_stride=100))
    assert np.max(traj.mean_n) < 1e-12
    assert np.max(np.abs(np.abs(traj.states[:, 0]) - 1.0)) < 1e-10


def test_cavity_decay_exact():
    # JC coupling switched off so the single-mode decay oracle is exact
    params = cp.SystemParams(f_drive=0.0, delta=0.0, n_max=12, kappa=0.3,
                             g_coupling=0.0)
    rho0 = to_density(basis_state(Tls.G, 1, 12))
    traj = cp.evolve_lindblad(params, rho0, cp.TimeGrid(10.0, 1e-3, 100))
    err = np.max(np.abs(traj.mean_n - np.exp(-0.3 * traj.times)))
    assert err < 1e-6


def test_pure_dephasing_exact():
    params = cp.SystemParams(f_drive=0.0, delta=0.0, n_max=12, gamma_pd=0.4,
                             g_coupling=0.0)
    rho0 = to_density(cp.prepare_state("lds_plus", 12))
    traj = cp.evolve_lindblad(params, rho0, cp.TimeGrid(8.0, 1e-3, 100),
                              store_states=True)
    coh = np.abs(traj.states[:, flat_index(Tls.G, 0), flat_index(Tls.X, 0)])
    err = np.max(np.abs(coh - 0.5 * np.exp(-0.4 * traj.times)))
    assert err < 1e-6


def test_lindblad_reduces_to_schrodinger_without_rates():
    params = cp.SystemParams(f_drive=2.0, delta=0.3, n_max=40)
    psi0 = cp.prepare_state("bare_ground", 40)
    grid = cp.TimeGrid(5.0, 1e-3, 100)
    pure = cp.evolve_schrodinger(params, psi0, grid)
    mixed = cp.evolve_lindblad(params, to_density(psi0), grid)
    assert np.max(np.abs(pure.mean_n - mixed.mean_n)) < 1e-8


def test_rk4_order_and_step_halving():
    params = cp.SystemParams(f_drive=2.0, delta=0.5, n_max=24)
    psi0 = cp.prepare_state("lds_plus", 24)

    def final_mean(dt):
        traj = cp.evolve_schrodinger(params, psi0,
                                     cp.TimeGrid(2.0, dt, round(2.0 / dt)))
        return traj.mean_n[-1]

    ref = final_mean(2e-3 / 8)
    err1 = abs(final_mean(2e-3) - ref)
    err2 = abs(final_mean(1e-3) - ref)
    assert 12 < err1 / err2 < 20  # classic 4th order
    assert abs(final_mean(1e-3) - final_mean(5e-4)) / abs(ref) < 1e-6


def test_coupling_scale_invariance():
    # scaling all rates by s and time by 1/s leaves observables unchanged
    s = 2.0
    base = cp.SystemParams(f_drive=1.0, delta=0.2, kappa=0.05, gamma_rd=0.02,
                           gamma_pd=0.01, n_max=30)
    scaled = cp.SystemParams(f_drive=s * 1.0, delta=s * 0.2, kappa=s * 0.05,
                             gamma_rd=s * 0.02, gamma_pd=s * 0.01, n_max=30)
    rho0 = to_density(cp.prepare_state("bare_ground", 30))
    t1 = cp.evolve_lindblad(base, rho0, cp.TimeGrid(6.0, 1e-3, 200))
    t2 = cp.evolve_lindblad(scaled, rho0, cp.TimeGrid(6.0 / s, 1e-3 / s, 200))
    np.testing.assert_allclose(t1.mean_n, t2.mean_n, atol=1e-6)
    np.testing.assert_allclose(t1.times, s * t2.times, atol=1e-12)


def test_lindblad_trace_and_positivity():
    params = cp.SystemParams(f_drive=1.5, delta=0.3, n_max=30, kappa=0.2,
                             gamma_rd=0.1, gamma_pd=0.05)
    rho0 = to_density(cp.prepare_state("bare_ground", 30))
    traj = cp.evolve_lindblad(params, rho0, cp.TimeGrid(20.0, 1e-3, 1000),
                              store_states=True)
    assert np.max(np.abs(traj.norm_or_trace - 1.0)) < 1e-6
    for rho in traj.states[::4]:
        assert np.linalg.eigvalsh(rho).min() > -1e-6


def test_energy_conservation_closed_run():
    params = cp.SystemParams(f_drive=5.0, delta=0.1, n_max=120)
    psi0 = cp.prepare_state("bare_ground", 120)
    traj = cp.evolve_schrodinger(params, psi0, cp.TimeGrid(20.0, 1e-3, 500))
    e = np.array([mean_energy(params, s) for s in traj.states])
    assert np.max(np.abs(e - e[0])) < 1e-5 * (abs(e[0]) + 1)


def test_truncation_overflow_detected():
    params = cp.SystemParams(f_drive=5.0, delta=0.0, n_max=20)
    with pytest.raises(TruncationOverflow):
        cp.evolve_schrodinger(params, cp.prepare_state("bare_ground", 20),
                              cp.TimeGrid(20.0, 1e-3, 100))


def test_find_stationary_dark_state():
    params = cp.SystemParams(f_drive=0.0, delta=0.0, n_max=12, kappa=0.5)
    rho0 = to_density(basis_state(Tls.G, 2, 12))
    rho_inf = cp.find_stationary(params, rho0, dt=2e-3)
    assert rho_inf[0, 0].real == pytest.approx(1.0, abs=1e-5)
    assert cp.mean_photon_number(rho_inf) < 1e-5


def test_find_stationary_needs_dissipation():
    params = cp.SystemParams(f_drive=1.0, delta=0.1, n_max=12)
    rho0 = to_density(cp.prepare_state("bare_ground", 12))
    with pytest.raises(ValueError):
        cp.find_stationary(params, rho0, dt=1e-3)


def test_trajectory_snapshot_bookkeeping():
    params = cp.SystemParams(f_drive=0.5, delta=0.1, n_max=20)
    traj = cp.evolve_schrodinger(params, cp.prepare_state("bare_ground", 20),
                                 cp.TimeGrid(1.0, 1e-3, 300))
    # snapshots at steps 0, 300, 600, 900 and the final step 1000
    np.testing.assert_allclose(traj.times, [0.0, 0.3, 0.6, 0.9, 1.0])
    assert np.all(np.diff(traj.times) > 0)
    assert traj.pn.shape == (5, 21)
