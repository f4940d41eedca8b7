import numpy as np
import pytest

import cavity_packets as cp
from cavity_packets import backend
from conftest import coherent_density


@pytest.fixture
def both_backends():
    yield
    backend.set_backend("numba")


def _run_both(fn):
    backend.set_backend("numba")
    a = fn()
    backend.set_backend("numpy")
    b = fn()
    backend.set_backend("numba")
    return a, b


def test_backend_selection_roundtrip(both_backends):
    backend.set_backend("numpy")
    assert backend.active_backend() == "numpy"
    backend.set_backend("numba")
    assert backend.active_backend() == "numba"
    with pytest.raises(ValueError):
        backend.set_backend("fortran")


def test_schrodinger_backends_agree(both_backends):
    params = cp.SystemParams(f_drive=2.0, delta=0.3, n_max=30)
    psi0 = cp.prepare_state("lds_plus", 30)
    grid = cp.TimeGrid(4.0, 1e-3, 200)

    a, b = _run_both(lambda: cp.evolve_schrodinger(params, psi0, grid))
    np.testing.assert_allclose(a.states, b.states, atol=1e-12)
    np.testing.assert_allclose(a.mean_n, b.mean_n, atol=1e-12)


def test_lindblad_backends_agree(both_backends):
    params = cp.SystemParams(f_drive=1.5, delta=0.3, n_max=24, kappa=0.2,
                             gamma_rd=0.1, gamma_pd=0.05)
    psi = (cp.basis_state(cp.Tls.G, 0, 24) + 1j * cp.basis_state(cp.Tls.X, 2, 24)) / np.sqrt(2)
    rho0 = cp.to_density(psi)
    grid = cp.TimeGrid(3.0, 2e-3, 100)

    a, b = _run_both(lambda: cp.evolve_lindblad(params, rho0, grid, store_states=True))
    np.testing.assert_allclose(a.final_state, b.final_state, atol=1e-12)
    np.testing.assert_allclose(a.states, b.states, atol=1e-12)
    np.testing.assert_allclose(a.pn, b.pn, atol=1e-12)


def test_wigner_backends_agree(both_backends):
    rho = coherent_density(1.0 + 0.5j, 25)
    axis = np.linspace(-4, 4, 41)
    a, b = _run_both(lambda: cp.wigner(rho, axis, axis).values)
    np.testing.assert_allclose(a, b, atol=1e-12)
