"""Measured quantities: photon number distribution, means, photonic
reduction and the Wigner function.

Wigner convention: W(z) = (2/pi) Tr((-1)^{a'a} D'(z) rho_phot D(z)) with
D(z) = exp(z a' - z* a), so a coherent state alpha peaks at z = alpha with
W_max = 2/pi and the vacuum is (2/pi) exp(-2|z|^2). Evaluation uses the
displaced-parity identity D(z) Pi D'(z) = D(2z) Pi with closed-form Fock
matrix elements of the displacement operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import GridTooSmall
from .model import SystemParams, h_tridiagonal

WIGNER_PAD = 50  # extra Fock levels in the displacement workspace

__all__ = [
    "PhotonDistribution",
    "WignerGrid",
    "photon_distribution",
    "mean_photon_number",
    "reduce_photonic",
    "wigner",
    "mean_energy",
]


@dataclass
class PhotonDistribution:
    """P_n snapshot; probs[n] for n = 0..n_max."""

    probs: np.ndarray
    time: float | None = None


def _pn_values(state: np.ndarray) -> np.ndarray:
    if state.ndim == 1:
        w = np.abs(state) ** 2
        p = w[0::2] + w[1::2]
    elif state.ndim == 2:
        d = np.real(np.diag(state))
        p = d[0::2] + d[1::2]
    else:
        raise ValueError("state must be a vector or a square matrix")
    bad = p < -1e-12
    if np.any(bad):
        n = int(np.argmax(bad))
        raise ValueError(f"P_{n} = {p[n]:.3e} violates positivity beyond roundoff")
    return np.where(p < 0, 0.0, p)


def photon_distribution(state: np.ndarray, time: float | None = None) -> PhotonDistribution:
    """P_n = |<G,n|psi>|^2 + |<X,n|psi>|^2, or the matching diagonal sums of rho."""
    return PhotonDistribution(probs=_pn_values(state), time=time)


def mean_photon_number(state: np.ndarray) -> float:
    """<a'a> = sum_n n P_n."""
    p = _pn_values(state)
    return float(np.arange(p.shape[0]) @ p)


def reduce_photonic(rho: np.ndarray) -> np.ndarray:
    """Partial trace over the TLS: (n_max+1)^2 photonic density matrix."""
    return rho[0::2, 0::2] + rho[1::2, 1::2]


@dataclass
class WignerGrid:
    """W sampled on the rectangle re_axis x im_axis; values[i, j] = W(re_i + i im_j)."""

    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray

    def normalization(self) -> float:
        """Riemann sum of W over the grid; 1 for states well inside the grid."""
        da = (self.re_axis[1] - self.re_axis[0]) * (self.im_axis[1] - self.im_axis[0])
        return float(self.values.sum() * da)

    def min(self) -> float:
        return float(self.values.min())


def wigner(rho_phot: np.ndarray, re_axis: np.ndarray | None = None,
           im_axis: np.ndarray | None = None) -> WignerGrid:
    """Evaluate W on a uniform grid (default 201x201 over [-12, 12]^2).

    Raises GridTooSmall unless every Fock level populated above 1e-8
    satisfies n < (max |z|)^2 / 2.
    """
    if re_axis is None:
        re_axis = np.linspace(-12.0, 12.0, 201)
    if im_axis is None:
        im_axis = re_axis.copy()
    re_axis = np.asarray(re_axis, dtype=np.float64)
    im_axis = np.asarray(im_axis, dtype=np.float64)

    occ = np.real(np.diag(rho_phot))
    populated = np.nonzero(occ > 1e-8)[0]
    n_sup = int(populated[-1]) if populated.size else 0
    zmax = np.hypot(np.max(np.abs(re_axis)), np.max(np.abs(im_axis)))
    if n_sup >= zmax ** 2 / 2.0:
        raise GridTooSmall(
            f"state populated up to n = {n_sup} needs max|z| > {np.sqrt(2 * n_sup):.1f}, "
            f"grid reaches {zmax:.1f}"
        )

    values = backend.kernels().wigner_grid_eval(
        np.ascontiguousarray(rho_phot, dtype=np.complex128),
        re_axis, im_axis, WIGNER_PAD,
    )
    return WignerGrid(re_axis=re_axis, im_axis=im_axis, values=values)


def mean_energy(params: SystemParams, state: np.ndarray) -> float:
    """<H> of a pure state or density matrix, via the tridiagonal form."""
    diag, off = h_tridiagonal(params)
    if state.ndim == 1:
        v = state
        hv = diag * v
        hv[:-1] += off * v[1:]
        hv[1:] += off * v[:-1]
        return float(np.real(np.vdot(v, hv)))
    d = np.real(np.diag(state))
    sub = np.diag(state, k=-1)
    return float(diag @ d + 2.0 * np.real(off @ sub))
