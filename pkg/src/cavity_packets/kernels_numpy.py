"""Pure-numpy reference implementations of the hot kernels.

These define the semantics; kernels_numba mirrors them. Selected at runtime
via CAVITY_PACKETS_BACKEND=numpy (see backend.py). Status codes: 0 ok,
1 truncation overflow, 2 norm drift.
"""

import numpy as np


def _h_apply(diag, off, x):
    y = diag * x
    y[:-1] += off * x[1:]
    y[1:] += off * x[:-1]
    return y


def schrodinger_run(diag, off, psi0, dt, n_steps, stride, guard_tol, norm_tol):
    dim = psi0.shape[0]
    guard_start = max(dim - 20, 0)

    n_snap = n_steps // stride + 1
    if n_steps % stride != 0:
        n_snap += 1
    snaps = np.zeros((n_snap, dim), dtype=np.complex128)
    snap_steps = np.zeros(n_snap, dtype=np.int64)

    psi = psi0.astype(np.complex128).copy()
    snaps[0] = psi
    isnap = 1
    status = 0
    fail_step = -1

    for step in range(1, n_steps + 1):
        k1 = _h_apply(diag, off, psi)
        k2 = _h_apply(diag, off, psi - 0.5j * dt * k1)
        k3 = _h_apply(diag, off, psi - 0.5j * dt * k2)
        k4 = _h_apply(diag, off, psi - 1j * dt * k3)
        psi = psi - 1j * (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)

        if np.sum(np.abs(psi[guard_start:]) ** 2) > guard_tol:
            status = 1
            fail_step = step
            break
        if step % stride == 0 or step == n_steps:
            if abs(np.linalg.norm(psi) - 1.0) > norm_tol:
                status = 2
                fail_step = step
                break
            snaps[isnap] = psi
            snap_steps[isnap] = step
            isnap += 1

    return snaps[:isnap], snap_steps[:isnap], status, fail_step


def _make_lindblad_rhs(diag, off, nf, sf, w, kappa, g_rd, g_pd):
    dim = diag.shape[0]
    col = diag[None, :]
    row = diag[:, None]
    if kappa > 0.0:
        ww = w[: dim - 2, None] * w[None, : dim - 2]
        nsum = 0.5 * (nf[:, None] + nf[None, :])
    if g_rd > 0.0:
        ssum = 0.5 * (sf[:, None] + sf[None, :])
    if g_pd > 0.0:
        perp = (sf[:, None] != sf[None, :])

    def rhs(rho):
        h = row * rho - rho * col
        h[:-1, :] += off[:, None] * rho[1:, :]
        h[1:, :] += off[:, None] * rho[:-1, :]
        h[:, :-1] -= rho[:, 1:] * off[None, :]
        h[:, 1:] -= rho[:, :-1] * off[None, :]
        out = -1j * h
        if kappa > 0.0:
            out[:-2, :-2] += kappa * ww * rho[2:, 2:]
            out -= kappa * nsum * rho
        if g_rd > 0.0:
            out[0::2, 0::2] += g_rd * rho[1::2, 1::2]
            out -= g_rd * ssum * rho
        if g_pd > 0.0:
            out[perp] -= g_pd * rho[perp]
        return out

    return rhs


def lindblad_run(diag, off, nf, sf, w, kappa, g_rd, g_pd, rho0, dt, n_steps,
                 stride, guard_tol, store_states):
    dim = rho0.shape[0]
    nlev = dim // 2
    guard_start = max(dim - 20, 0)
    rhs = _make_lindblad_rhs(diag, off, nf, sf, w, kappa, g_rd, g_pd)

    n_snap = n_steps // stride + 1
    if n_steps % stride != 0:
        n_snap += 1
    snap_steps = np.zeros(n_snap, dtype=np.int64)
    pn = np.zeros((n_snap, nlev), dtype=np.float64)
    tr = np.zeros(n_snap, dtype=np.float64)
    mean_n = np.zeros(n_snap, dtype=np.float64)
    pop_x = np.zeros(n_snap, dtype=np.float64)
    rho_snaps = np.zeros((n_snap if store_states else 0, dim, dim), dtype=np.complex128)

    rho = rho0.astype(np.complex128).copy()

    def record(isnap):
        p = np.real(np.diag(rho))
        pn[isnap] = p[0::2] + p[1::2]
        tr[isnap] = p.sum()
        mean_n[isnap] = (nf * p).sum()
        pop_x[isnap] = (sf * p).sum()
        if store_states:
            rho_snaps[isnap] = rho

    record(0)
    isnap = 1
    status = 0
    fail_step = -1

    for step in range(1, n_steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + (0.5 * dt) * k1)
        k3 = rhs(rho + (0.5 * dt) * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)

        if np.sum(np.real(np.diag(rho)[guard_start:])) > guard_tol:
            status = 1
            fail_step = step
            break
        if step % stride == 0 or step == n_steps:
            rho = 0.5 * (rho + rho.conj().T)
            record(isnap)
            snap_steps[isnap] = step
            isnap += 1

    return (rho, snap_steps[:isnap], pn[:isnap], tr[:isnap], mean_n[:isnap],
            pop_x[:isnap], rho_snaps[:isnap] if store_states else rho_snaps,
            status, fail_step)


def wigner_grid_eval(rho, re_axis, im_axis, pad):
    """W(z) = (2/pi) Tr(rho D(2z) Pi); see kernels_numba for the recurrence."""
    nlev = rho.shape[0]
    psize = nlev + pad
    sq = np.sqrt(np.arange(psize, dtype=np.float64))
    signs = np.where(np.arange(nlev) % 2 == 0, 1.0, -1.0)
    rho_signed = (rho * signs[:, None]).T  # rho_signed[n, m] = (-1)^m rho[m, n]

    out = np.empty((re_axis.shape[0], im_axis.shape[0]), dtype=np.float64)
    dmat = np.empty((psize, psize), dtype=np.complex128)
    for a, re in enumerate(re_axis):
        for b, im in enumerate(im_axis):
            beta = 2.0 * complex(re, im)
            bconj = beta.conjugate()
            col0 = np.empty(psize, dtype=np.complex128)
            col0[0] = np.exp(-0.5 * abs(beta) ** 2)
            if psize > 1:
                col0[1:] = beta / sq[1:]
                np.cumprod(col0, out=col0)
            dmat[:, 0] = col0
            for n in range(psize - 1):
                prev = dmat[:, n]
                cur = -bconj * prev
                cur[1:] += sq[1:] * prev[:-1]
                dmat[:, n + 1] = cur / sq[n + 1]
            out[a, b] = (2.0 / np.pi) * np.real(
                np.sum(rho_signed * dmat[:nlev, :nlev])
            )
    return out
