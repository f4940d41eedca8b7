"""Closed-form strong-driving analytics (units of g = 1).

Laser-dressed-state (LDS) side: effective quadratic Hamiltonians for the
|+/-> branches, anharmonicity parameter

    theta = (g/2)^2 (1/(2f+delta) + 1/(2f-delta)),

eigenfrequencies Omega+/- = delta sqrt(1 -/+ 2 theta/delta), Bogoliubov
parameters chi, zeta, the second-order transform coefficients p1, q1, p2,
q2, r2, the analytic mean photon number and the phase-space trajectory z(t).

Cavity-dressed-state (CDS) side: ladder frequencies delta*n +/- sqrt(n),
all wave-range turning points, the packet-split condition and the
stationary-state predictions of the dissipative regime.

The paper's soft conditions are made sharp here and are keyword
overridable: "much larger than g^2/4f" means >= 4 g^2/4f, the bimodal
window is |delta - g^2/4f| <= g^2/8f, the split condition |delta| >= g^2/f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .errors import PoleAtTwoF, UnstableBranch

import numpy as np

G = 1.0  # TLS-cavity coupling fixes the unit system

__all__ = [
    "LdsReport",
    "CdsReport",
    "DressedReport",
    "lds_report",
    "cds_report",
    "dressed_report",
    "lds_mean_photon",
    "lds_trajectory",
]


@dataclass(frozen=True)
class LdsReport:
    """Laser-dressed-state quantities for one (f, delta)."""

    f_drive: float
    delta: float
    theta: float
    omega_plus: complex   # purely imaginary when the branch is unstable
    omega_minus: complex
    stable_plus: bool
    stable_minus: bool
    chi_plus: float       # nan on an unstable or frozen (Omega = 0) branch
    chi_minus: float
    zeta_plus: float
    zeta_minus: float
    p1: float
    q1: float
    p2: float
    q2: float
    r2: float
    amplitude: float      # (g/delta)^2, inf at delta = 0
    validity_lds: bool
    validity_ratio: float  # |delta| / (g^2/4f)


@dataclass(frozen=True)
class CdsReport:
    """Cavity-dressed-state turning points and regime flags for one (f, delta)."""

    f_drive: float
    delta: float
    threshold_shift: float   # g^2/8f: where an upper turning point switches branch
    threshold_validity: float  # g^2/4f: center of the bimodal stationary window
    threshold_split: float   # g^2/f: packet-split condition scale
    n_plus_up: float
    n_minus_up: float
    n_tilde_lo: float        # (g/delta)^2, inf at delta = 0
    n_tilde_hi: float
    split_flag: bool
    bimodal_window: bool
    stationary_means: tuple[float, ...]


@dataclass(frozen=True)
class DressedReport:
    lds: LdsReport
    cds: CdsReport

    def to_dict(self) -> dict:
        d = {"lds": asdict(self.lds), "cds": asdict(self.cds)}
        for key in ("omega_plus", "omega_minus"):
            z = d["lds"][key]
            d["lds"][key] = {"re": z.real, "im": z.imag}
        d["cds"]["stationary_means"] = list(self.cds.stationary_means)
        return d


def _branch_sign(branch: str) -> int:
    if branch == "+":
        return +1
    if branch == "-":
        return -1
    raise ValueError("branch must be '+' or '-'")


def lds_report(f: float, delta: float, validity_factor: float = 4.0) -> LdsReport:
    """All LDS closed forms; raises PoleAtTwoF at the coefficient poles."""
    if f <= 0:
        raise ValueError("f must be > 0")
    if abs(abs(delta) - 2.0 * f) < 1e-9:
        raise PoleAtTwoF(f"|delta| = {abs(delta):g} hits the pole at 2f = {2 * f:g}")

    theta = (G / 2.0) ** 2 * (1.0 / (2.0 * f + delta) + 1.0 / (2.0 * f - delta))

    def omega(sign: int) -> tuple[complex, bool, float, float]:
        om2 = delta * delta - sign * 2.0 * theta * delta
        stable = om2 >= 0.0
        om = complex(math.sqrt(om2), 0.0) if stable else complex(0.0, math.sqrt(-om2))
        if stable and om.real > 0.0:
            chi = 0.5 * math.asinh(sign * theta / om.real)
            zeta = sign * G / (2.0 * om.real) * math.exp(-chi)
        else:
            chi = math.nan
            zeta = math.nan
        return om, stable, chi, zeta

    om_p, st_p, chi_p, zeta_p = omega(+1)
    om_m, st_m, chi_m, zeta_m = omega(-1)

    ratio = abs(delta) / (G * G / (4.0 * f))
    return LdsReport(
        f_drive=f,
        delta=delta,
        theta=theta,
        omega_plus=om_p,
        omega_minus=om_m,
        stable_plus=st_p,
        stable_minus=st_m,
        chi_plus=chi_p,
        chi_minus=chi_m,
        zeta_plus=zeta_p,
        zeta_minus=zeta_m,
        p1=G / 2.0 / (2.0 * f + delta),
        q1=-G / 2.0 / (2.0 * f - delta),
        p2=(G / 2.0) ** 2 / ((2.0 * f + delta) * (f + delta)),
        q2=-((G / 2.0) ** 2) / ((2.0 * f - delta) * (f - delta)),
        r2=(G / 2.0) ** 2 / (2.0 * f)
        * (1.0 / (2.0 * f + delta) - 1.0 / (2.0 * f - delta)),
        amplitude=(G / delta) ** 2 if delta != 0 else math.inf,
        validity_lds=ratio >= validity_factor,
        validity_ratio=ratio,
    )


def lds_mean_photon(f: float, delta: float, branch: str, t) -> np.ndarray | float:
    """Analytic <a'a>(t) of the effective branch Hamiltonian from the photon
    vacuum: the fundamental (g/delta)^2 (1-cos Om t)/2 plus its second
    harmonic with weight (theta/2 delta^2)(theta +/- g^2/2 Om)."""
    sign = _branch_sign(branch)
    rep = lds_report(f, delta)
    stable = rep.stable_plus if sign > 0 else rep.stable_minus
    om = (rep.omega_plus if sign > 0 else rep.omega_minus).real
    if not stable or om == 0.0:
        raise UnstableBranch(f"branch {branch} has no real oscillation at f={f}, delta={delta}")
    a = (G / delta) ** 2
    b = rep.theta / (2.0 * delta * delta) * (rep.theta + sign * G * G / (2.0 * om))
    t = np.asarray(t, dtype=float)
    out = a * (1.0 - np.cos(om * t)) / 2.0 + b * (1.0 - np.cos(2.0 * om * t)) / 2.0
    return out if out.ndim else float(out)


def lds_trajectory(f: float, delta: float, t) -> np.ndarray | complex:
    """Phase-space trajectory z(t) of the + branch packet (z = Q + iP
    convention, photon number |z|^2/2)."""
    rep = lds_report(f, delta)
    om = rep.omega_plus.real
    if not rep.stable_plus or om == 0.0:
        raise UnstableBranch(f"+ branch unstable at f={f}, delta={delta}")
    t = np.asarray(t, dtype=float)
    z = (-G / (math.sqrt(2.0) * delta) * (1.0 - np.cos(om * t))
         - 1j * G / (math.sqrt(2.0) * om) * np.sin(om * t))
    return z if z.ndim else complex(z)


def _root_shifted(f: float, delta: float, sign: int) -> float:
    # ((g/2 delta) (sqrt(1 + sign 8 f delta / g^2) - 1))^2
    return (G / (2.0 * delta)) ** 2 * (math.sqrt(1.0 + sign * 8.0 * f * delta / G**2) - 1.0) ** 2


def cds_report(f: float, delta: float) -> CdsReport:
    """Turning points of the decoupled CDS chains and the dissipative
    stationary-state predictions.

    The upper turning point of each branch follows the -2f (or +2f)
    crossing while the chain frequency dips past it and jumps to the root
    (g/delta)^2 once |delta| exceeds g^2/8f and the barrier opens; the jump
    (a factor 4 at the threshold) is exact, not a discretization artifact.
    """
    if f <= 0:
        raise ValueError("f must be > 0")
    thr_shift = G * G / (8.0 * f)
    thr_window = G * G / (4.0 * f)
    thr_split = G * G / f

    if delta == 0.0:
        n_plus = n_minus = (2.0 * f / G) ** 2
        n_tilde_lo = n_tilde_hi = math.inf
    else:
        n_plus = _root_shifted(f, delta, +1) if delta >= -thr_shift else (G / delta) ** 2
        n_minus = _root_shifted(f, delta, -1) if delta <= thr_shift else (G / delta) ** 2
        n_tilde_lo = (G / delta) ** 2
        n_tilde_hi = (G / (2.0 * delta)) ** 2 * (
            math.sqrt(1.0 + 8.0 * f * abs(delta) / G**2) + 1.0
        ) ** 2

    window = abs(delta - thr_window) <= thr_shift
    if window:
        means: tuple[float, ...] = ((f / G) ** 2, (G / (2.0 * delta)) ** 2)
    elif delta < thr_window:
        means = ((f / G) ** 2,)
    else:
        means = ((G / (2.0 * delta)) ** 2,)

    return CdsReport(
        f_drive=f,
        delta=delta,
        threshold_shift=thr_shift,
        threshold_validity=thr_window,
        threshold_split=thr_split,
        n_plus_up=n_plus,
        n_minus_up=n_minus,
        n_tilde_lo=n_tilde_lo,
        n_tilde_hi=n_tilde_hi,
        split_flag=abs(delta) >= thr_split,
        bimodal_window=window,
        stationary_means=means,
    )


def dressed_report(f: float, delta: float) -> DressedReport:
    return DressedReport(lds=lds_report(f, delta), cds=cds_report(f, delta))
