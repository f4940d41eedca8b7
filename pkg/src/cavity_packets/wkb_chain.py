"""Chain-mode eigenproblem of the decoupled cavity-dressed ladders.

The modes solve  omega_n c_n + (xi/2)(c_{n+1} + c_{n-1}) = lambda c_n  with
hard walls at n = -1 and n = M+1. A site is wave-like exactly when
|lambda - omega_n| <= |xi| and the amplitude decays exponentially outside;
decay_verification checks that on computed eigenvectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "ChainSpec",
    "ChainModes",
    "cds_chain",
    "chain_eigensolve",
    "classify_region",
    "decay_verification",
    "DecayEntry",
    "DecayReport",
]

ENVELOPE_FLOOR = 1e-13  # relative amplitude below which roundoff dominates
SLOPE_SITES = 10


@dataclass(frozen=True)
class ChainSpec:
    """Site frequencies omega_n (n = 0..M) and hopping strength xi."""

    omegas: np.ndarray
    xi: float

    def __post_init__(self):
        if self.omegas.shape[0] < 17:
            raise ValueError("chain needs M >= 16 (at least 17 sites)")
        if not np.all(np.isfinite(self.omegas)):
            raise ValueError("omegas must be finite")

    @property
    def size(self) -> int:
        return self.omegas.shape[0]


@dataclass
class ChainModes:
    eigenvalues: np.ndarray    # ascending
    eigenvectors: np.ndarray   # eigenvectors[:, k] normalized


def cds_chain(f: float, delta: float, branch: str, size: int) -> ChainSpec:
    """Chain for the C+ / C- ladder: omega_n = delta n +/- sqrt(n), xi = -/+ f."""
    n = np.arange(size, dtype=np.float64)
    if branch == "+":
        return ChainSpec(omegas=delta * n + np.sqrt(n), xi=-f)
    if branch == "-":
        return ChainSpec(omegas=delta * n - np.sqrt(n), xi=+f)
    raise ValueError("branch must be '+' or '-'")


def chain_eigensolve(spec: ChainSpec) -> ChainModes:
    """Full symmetric-tridiagonal eigendecomposition (Dirichlet walls)."""
    off = np.full(spec.size - 1, spec.xi / 2.0)
    vals, vecs = eigh_tridiagonal(spec.omegas, off)
    return ChainModes(eigenvalues=vals, eigenvectors=vecs)


def classify_region(spec: ChainSpec, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-site oscillatory/evanescent labels for eigenvalue lam.

    Returns (oscillatory mask, turning points); turning point i marks a
    label change between sites i and i+1.
    """
    osc = np.abs(lam - spec.omegas) <= abs(spec.xi)
    turning = np.nonzero(osc[:-1] != osc[1:])[0]
    return osc, turning


@dataclass
class DecayEntry:
    mode_index: int
    eigenvalue: float
    left_slope: float | None     # d log|c| / dn moving left, outside the window
    right_slope: float | None
    left_monotone: bool
    right_monotone: bool

    @property
    def passed(self) -> bool:
        ok_l = self.left_slope is None or (self.left_monotone and self.left_slope > 0)
        ok_r = self.right_slope is None or (self.right_monotone and self.right_slope < 0)
        return ok_l and ok_r


@dataclass
class DecayReport:
    entries: list[DecayEntry]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)


def _side_check(absc: np.ndarray, sites: np.ndarray, outward: int) -> tuple[float | None, bool]:
    """Fit log|c| over up to SLOPE_SITES sites and check the envelope
    decreases monotonically moving outward (roundoff floor excluded)."""
    floor = ENVELOPE_FLOOR * absc.max()
    vals = absc[sites]
    live = vals > floor
    if live.sum() < 2:
        return None, True
    sites = sites[live]
    vals = vals[live]
    fit_sites = sites[:SLOPE_SITES] if outward > 0 else sites[-SLOPE_SITES:]
    fit_vals = vals[:SLOPE_SITES] if outward > 0 else vals[-SLOPE_SITES:]
    slope = float(np.polyfit(fit_sites, np.log(fit_vals), 1)[0])
    ordered = vals if outward > 0 else vals[::-1]
    monotone = bool(np.all(np.diff(ordered) <= 1e-12 * absc.max()))
    return slope, monotone


def decay_verification(modes: ChainModes, spec: ChainSpec,
                       lambda_window: tuple[float, float]) -> DecayReport:
    """For every mode with eigenvalue inside lambda_window, fit the decay
    slope of log|c_n| beyond each turning point and check the envelope is
    monotone in the evanescent regions. Modes without an evanescent region
    contribute no entry."""
    lo, hi = lambda_window
    entries: list[DecayEntry] = []
    for k in np.nonzero((modes.eigenvalues >= lo) & (modes.eigenvalues <= hi))[0]:
        lam = float(modes.eigenvalues[k])
        osc, _ = classify_region(spec, lam)
        if not osc.any():
            continue
        first = int(np.argmax(osc))
        last = int(spec.size - 1 - np.argmax(osc[::-1]))
        absc = np.abs(modes.eigenvectors[:, k])

        left_slope = right_slope = None
        left_mono = right_mono = True
        if first > 0:
            left_slope, left_mono = _side_check(absc, np.arange(0, first), outward=-1)
        if last < spec.size - 1:
            right_slope, right_mono = _side_check(
                absc, np.arange(last + 1, spec.size), outward=+1)
        if left_slope is None and right_slope is None:
            continue
        entries.append(DecayEntry(
            mode_index=int(k),
            eigenvalue=lam,
            left_slope=left_slope,
            right_slope=right_slope,
            left_monotone=left_mono,
            right_monotone=right_mono,
        ))
    return DecayReport(entries=entries)
