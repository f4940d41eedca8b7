import numpy as np
import pytest

import cavity_packets as cp


@pytest.fixture(scope="session")
def rabi_trajectory():
    """Undriven vacuum-Rabi flip |X,0> <-> |G,1>, exact <n> = sin^2(t)."""
    params = cp.SystemParams(f_drive=0.0, delta=0.0, n_max=12)
    psi0 = cp.basis_state(cp.Tls.X, 0, 12)
    grid = cp.TimeGrid(t_final=6.0, dt=1e-3, output_stride=50)
    return cp.evolve_schrodinger(params, psi0, grid)


def coherent_density(alpha, n_max):
    amps = cp.coherent_amplitudes(alpha, n_max)
    return np.outer(amps, amps.conj())
