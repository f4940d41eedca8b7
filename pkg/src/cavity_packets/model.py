"""Truncated Hilbert space, model parameters and operator construction.

The two-level system (TLS) couples to a single cavity mode. Everything is
expressed in units of the TLS-cavity coupling g, i.e. hbar = g = 1 and time
is measured in 1/g. The bare product basis |G,n>, |X,n> is flattened as

    flat(tls, n) = 2 n + tls      (tls: G = 0, X = 1)

which makes the rotating-frame Hamiltonian

    H = dxl s+s- + delta a'a + g (a s+ + a' s-) - f (s+ + s-)

a real symmetric *tridiagonal* matrix: diagonal [delta*n, dxl + delta*n],
off-diagonals alternating [-f, g*sqrt(n+1)]. The integrators exploit this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import TruncationOverflow

__all__ = [
    "Tls",
    "HilbertIndex",
    "SystemParams",
    "OperatorSet",
    "flat_index",
    "unflatten",
    "h_tridiagonal",
    "build_operators",
    "prepare_state",
    "basis_state",
    "coherent_amplitudes",
    "lds_branch_state",
    "to_density",
]


class Tls(IntEnum):
    """TLS level; the sign convention is sigma3 |X> = +|X>, sigma3 |G> = -|G>."""

    G = 0
    X = 1


def flat_index(tls: Tls | int, n: int) -> int:
    return 2 * n + int(tls)


def unflatten(flat: int) -> tuple[Tls, int]:
    return Tls(flat & 1), flat >> 1


@dataclass(frozen=True)
class HilbertIndex:
    """Basis label |tls, n> together with its flat row index."""

    tls: Tls
    n: int

    @property
    def flat(self) -> int:
        return flat_index(self.tls, self.n)

    @classmethod
    def from_flat(cls, flat: int) -> "HilbertIndex":
        tls, n = unflatten(flat)
        return cls(tls, n)


@dataclass(frozen=True)
class SystemParams:
    """All model constants in units of g.

    f_drive   external driving strength f
    delta     laser-cavity detuning delta = omega_C - omega_L
    dxl       laser-TLS detuning omega_X - omega_L (0 for a resonantly driven TLS)
    kappa     cavity loss rate
    gamma_rd  radiative decay rate of the TLS
    gamma_pd  pure dephasing rate of the TLS
    n_max     highest photon number kept in the truncated Fock space
    g_coupling  coefficient of the TLS-cavity coupling term; 1 by definition
                of the unit system, settable to 0 for exact single-channel
                oracle tests (free decay, free dephasing)
    """

    f_drive: float
    delta: float
    dxl: float = 0.0
    kappa: float = 0.0
    gamma_rd: float = 0.0
    gamma_pd: float = 0.0
    n_max: int = 160
    g_coupling: float = 1.0

    def __post_init__(self):
        if self.f_drive < 0:
            raise ValueError("f_drive must be >= 0")
        for name in ("kappa", "gamma_rd", "gamma_pd"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.n_max < 8:
            raise ValueError("n_max must be >= 8")
        if self.g_coupling < 0:
            raise ValueError("g_coupling must be >= 0")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    @property
    def rates(self) -> tuple[float, float, float]:
        return (self.kappa, self.gamma_rd, self.gamma_pd)

    @property
    def sum_rates(self) -> float:
        return self.kappa + self.gamma_rd + self.gamma_pd


@dataclass(frozen=True)
class OperatorSet:
    """Dense operators in the flat bare basis plus the tridiagonal form of H."""

    hamiltonian: np.ndarray
    a_op: np.ndarray
    a_dag: np.ndarray
    sigma_plus: np.ndarray
    sigma_minus: np.ndarray
    sigma3: np.ndarray
    h_diag: np.ndarray
    h_offdiag: np.ndarray

    def tridiagonal(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (diagonal, first off-diagonal) of H; both real float64."""
        return self.h_diag, self.h_offdiag


def h_tridiagonal(params: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and first off-diagonal of H in the flat basis (real float64).

    diag[2n] = delta*n, diag[2n+1] = dxl + delta*n; the off-diagonal
    alternates -f (G,n <-> X,n) with g*sqrt(n+1) (X,n <-> G,n+1).
    """
    ns = np.arange(params.n_max + 1)
    dim = params.dim
    h_diag = np.empty(dim, dtype=np.float64)
    h_diag[0::2] = params.delta * ns
    h_diag[1::2] = params.dxl + params.delta * ns
    h_offdiag = np.empty(dim - 1, dtype=np.float64)
    h_offdiag[0::2] = -params.f_drive
    h_offdiag[1::2] = params.g_coupling * np.sqrt(ns[1:])
    return h_diag, h_offdiag


def build_operators(params: SystemParams) -> OperatorSet:
    """Construct H and the ladder/TLS operators on the truncated product space."""
    nmax = params.n_max
    dim = params.dim

    a_op = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, nmax + 1):
        rt = math.sqrt(n)
        a_op[flat_index(Tls.G, n - 1), flat_index(Tls.G, n)] = rt
        a_op[flat_index(Tls.X, n - 1), flat_index(Tls.X, n)] = rt
    a_dag = a_op.conj().T

    sigma_minus = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(nmax + 1):
        sigma_minus[flat_index(Tls.G, n), flat_index(Tls.X, n)] = 1.0
    sigma_plus = sigma_minus.conj().T
    sigma3 = sigma_plus @ sigma_minus - sigma_minus @ sigma_plus

    g = params.g_coupling
    hamiltonian = (
        params.dxl * (sigma_plus @ sigma_minus)
        + params.delta * (a_dag @ a_op)
        + g * (a_op @ sigma_plus + a_dag @ sigma_minus)
        - params.f_drive * (sigma_plus + sigma_minus)
    )

    h_diag, h_offdiag = h_tridiagonal(params)

    return OperatorSet(
        hamiltonian=hamiltonian,
        a_op=a_op,
        a_dag=a_dag,
        sigma_plus=sigma_plus,
        sigma_minus=sigma_minus,
        sigma3=sigma3,
        h_diag=h_diag,
        h_offdiag=h_offdiag,
    )


def basis_state(tls: Tls | int, n: int, n_max: int) -> np.ndarray:
    """Bare basis vector |tls, n> as a complex amplitude array."""
    if n > n_max:
        raise TruncationOverflow(f"Fock level {n} exceeds n_max = {n_max}")
    if n < 0:
        raise ValueError("photon number must be >= 0")
    psi = np.zeros(2 * (n_max + 1), dtype=np.complex128)
    psi[flat_index(tls, n)] = 1.0
    return psi


def prepare_state(kind: str, n_max: int) -> np.ndarray:
    """Prepare a normalized initial state.

    kind is one of 'bare_ground', 'lds_plus', 'lds_minus', 'fock:N',
    'excited_fock:N'. The laser-dressed states are
    |+/-,0> = (|G,0> +/- |X,0>)/sqrt(2).
    """
    if kind == "bare_ground":
        return basis_state(Tls.G, 0, n_max)
    if kind in ("lds_plus", "lds_minus"):
        sign = 1.0 if kind == "lds_plus" else -1.0
        psi = basis_state(Tls.G, 0, n_max)
        psi[flat_index(Tls.X, 0)] = sign
        return psi / math.sqrt(2.0)
    for prefix, tls in (("fock:", Tls.G), ("excited_fock:", Tls.X)):
        if kind.startswith(prefix):
            n = int(kind[len(prefix):])
            return basis_state(tls, n, n_max)
    raise ValueError(f"unknown initial state kind '{kind}'")


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Photon-mode coherent state, exp(-|a|^2/2) a^n/sqrt(n!), renormalized.

    Renormalization absorbs the truncated tail; keep |alpha|^2 well below
    n_max so the tail is negligible.
    """
    ns = np.arange(n_max + 1)
    if alpha == 0:
        amp = np.zeros(n_max + 1, dtype=np.complex128)
        amp[0] = 1.0
        return amp
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(ns[1:]))))
    amp = np.exp(
        -abs(alpha) ** 2 / 2
        + ns * np.log(complex(alpha))
        - 0.5 * log_fact
    ).astype(np.complex128)
    return amp / np.linalg.norm(amp)


def lds_branch_state(sign: int, photon_amps: np.ndarray) -> np.ndarray:
    """Product state |+/-> (x) photon state, in the flat bare basis."""
    nlev = photon_amps.shape[0]
    psi = np.zeros(2 * nlev, dtype=np.complex128)
    psi[0::2] = photon_amps / math.sqrt(2.0)
    psi[1::2] = (sign / math.sqrt(2.0)) * photon_amps
    return psi / np.linalg.norm(psi)


def to_density(psi: np.ndarray) -> np.ndarray:
    """rho = |psi><psi|."""
    return np.outer(psi, psi.conj())
