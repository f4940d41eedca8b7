"""Numba implementations of the hot numerical kernels.

Same call signatures and status conventions as kernels_numpy; see there for
the reference semantics. Status codes: 0 ok, 1 truncation overflow,
2 norm drift.
"""

import numpy as np
from numba import njit

_OPTS = dict(cache=True, nogil=True)


@njit(**_OPTS)
def _h_apply(diag, off, x, y):
    # y = H x for real symmetric tridiagonal H
    dim = x.shape[0]
    y[0] = diag[0] * x[0] + off[0] * x[1]
    for i in range(1, dim - 1):
        y[i] = off[i - 1] * x[i - 1] + diag[i] * x[i] + off[i] * x[i + 1]
    y[dim - 1] = off[dim - 2] * x[dim - 2] + diag[dim - 1] * x[dim - 1]


@njit(**_OPTS)
def schrodinger_run(diag, off, psi0, dt, n_steps, stride, guard_tol, norm_tol):
    dim = psi0.shape[0]
    guard_start = max(dim - 20, 0)  # top 10 photon levels, two TLS slots each

    n_snap = n_steps // stride + 1
    if n_steps % stride != 0:
        n_snap += 1
    snaps = np.zeros((n_snap, dim), dtype=np.complex128)
    snap_steps = np.zeros(n_snap, dtype=np.int64)

    psi = psi0.copy()
    k1 = np.empty(dim, dtype=np.complex128)
    k2 = np.empty(dim, dtype=np.complex128)
    k3 = np.empty(dim, dtype=np.complex128)
    k4 = np.empty(dim, dtype=np.complex128)
    tmp = np.empty(dim, dtype=np.complex128)

    snaps[0] = psi
    isnap = 1
    status = 0
    fail_step = -1
    half = 0.5 * dt
    sixth = dt / 6.0

    for step in range(1, n_steps + 1):
        # k buffers hold H applied to the stage input; the -i sits in the updates
        _h_apply(diag, off, psi, k1)
        for i in range(dim):
            tmp[i] = psi[i] - 1j * half * k1[i]
        _h_apply(diag, off, tmp, k2)
        for i in range(dim):
            tmp[i] = psi[i] - 1j * half * k2[i]
        _h_apply(diag, off, tmp, k3)
        for i in range(dim):
            tmp[i] = psi[i] - 1j * dt * k3[i]
        _h_apply(diag, off, tmp, k4)
        for i in range(dim):
            psi[i] = psi[i] - 1j * sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])

        top = 0.0
        for i in range(guard_start, dim):
            top += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
        if top > guard_tol:
            status = 1
            fail_step = step
            break

        if step % stride == 0 or step == n_steps:
            nrm2 = 0.0
            for i in range(dim):
                nrm2 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
            if abs(np.sqrt(nrm2) - 1.0) > norm_tol:
                status = 2
                fail_step = step
                break
            snaps[isnap] = psi
            snap_steps[isnap] = step
            isnap += 1

    return snaps[:isnap], snap_steps[:isnap], status, fail_step


@njit(**_OPTS)
def _lindblad_rhs_upper(diag, offp, nf, sf, w, kappa, g_rd, g_pd, rr, ri, outr, outi):
    # Upper triangle (j >= i) of
    #   -i[H, rho] + kappa D[a] + g_rd D[sigma-] + (g_pd/2)(s3 rho s3 - rho)
    # on split real/imaginary planes (keeps the loop SIMD friendly). Only the
    # upper triangles of rr/ri are ever read: the two subdiagonal reads in
    # the j = i column are folded in via Hermiticity. The planes are
    # (dim+2)-padded with zero guard rows/cols and offp is the zero-padded
    # off-diagonal, so every out-of-range neighbor access lands on a zero
    # and the body is branch-free.
    dim = diag.shape[0]
    half_k = 0.5 * kappa
    half_rd = 0.5 * g_rd
    for i in range(dim):
        di = diag[i]
        e_dn = offp[i - 1]
        e_up = offp[i]
        ni = nf[i]
        si = sf[i]
        gi = g_rd * (1.0 - si)
        wki = kappa * w[i]

        # j = i: the commutator diagonal reduces to 2 e (Im rho) terms and
        # the result is real, so outi stays 0 and rho's diagonal stays real
        outr[i, i] = (2.0 * e_dn * ri[i - 1, i] - 2.0 * e_up * ri[i, i + 1]
                      + (wki * w[i]) * rr[i + 2, i + 2]
                      + gi * (1.0 - si) * rr[i + 1, i + 1]
                      - (kappa * ni + g_rd * si) * rr[i, i])
        outi[i, i] = 0.0

        for j in range(i + 1, dim):
            dd = di - diag[j]
            hr = (dd * rr[i, j] + e_dn * rr[i - 1, j] + e_up * rr[i + 1, j]
                  - rr[i, j - 1] * offp[j - 1] - rr[i, j + 1] * offp[j])
            hi = (dd * ri[i, j] + e_dn * ri[i - 1, j] + e_up * ri[i + 1, j]
                  - ri[i, j - 1] * offp[j - 1] - ri[i, j + 1] * offp[j])
            sj = sf[j]
            gk = wki * w[j]
            grd = gi * (1.0 - sj)
            dec = (half_k * (ni + nf[j]) + half_rd * (si + sj)
                   + g_pd * (si + sj - 2.0 * si * sj))
            outr[i, j] = hi + gk * rr[i + 2, j + 2] + grd * rr[i + 1, j + 1] - dec * rr[i, j]
            outi[i, j] = -hr + gk * ri[i + 2, j + 2] + grd * ri[i + 1, j + 1] - dec * ri[i, j]


@njit(**_OPTS)
def _stage_update(rr, ri, kr, ki, c, yr, yi, dim):
    # y = rho + c*k, upper triangle only (the RHS never reads the lower one)
    for i in range(dim):
        for j in range(i, dim):
            yr[i, j] = rr[i, j] + c * kr[i, j]
            yi[i, j] = ri[i, j] + c * ki[i, j]


@njit(**_OPTS)
def _stage_update_acc(rr, ri, kr, ki, accr, acci, c, yr, yi, dim):
    # acc += 2k fused with y = rho + c*k
    for i in range(dim):
        for j in range(i, dim):
            kvr = kr[i, j]
            kvi = ki[i, j]
            accr[i, j] += 2.0 * kvr
            acci[i, j] += 2.0 * kvi
            yr[i, j] = rr[i, j] + c * kvr
            yi[i, j] = ri[i, j] + c * kvi


@njit(**_OPTS)
def lindblad_run(diag, off, nf, sf, w, kappa, g_rd, g_pd, rho0, dt, n_steps,
                 stride, guard_tol, store_states):
    dim = rho0.shape[0]
    nlev = dim // 2
    guard_start = max(dim - 20, 0)

    offp = np.zeros(dim + 1, dtype=np.float64)
    offp[: dim - 1] = off

    n_snap = n_steps // stride + 1
    if n_steps % stride != 0:
        n_snap += 1
    snap_steps = np.zeros(n_snap, dtype=np.int64)
    pn = np.zeros((n_snap, nlev), dtype=np.float64)
    tr = np.zeros(n_snap, dtype=np.float64)
    mean_n = np.zeros(n_snap, dtype=np.float64)
    pop_x = np.zeros(n_snap, dtype=np.float64)
    if store_states:
        rho_snaps = np.zeros((n_snap, dim, dim), dtype=np.complex128)
    else:
        rho_snaps = np.zeros((0, dim, dim), dtype=np.complex128)

    # padded split-plane working set, upper triangles live, guard rows/cols
    # and the stale lower triangles stay zero
    rr = np.zeros((dim + 2, dim + 2), dtype=np.float64)
    ri = np.zeros((dim + 2, dim + 2), dtype=np.float64)
    for i in range(dim):
        rr[i, i] = rho0[i, i].real
        for j in range(i + 1, dim):
            rr[i, j] = rho0[i, j].real
            ri[i, j] = rho0[i, j].imag
    kr = np.zeros((dim + 2, dim + 2), dtype=np.float64)
    ki = np.zeros((dim + 2, dim + 2), dtype=np.float64)
    accr = np.zeros((dim + 2, dim + 2), dtype=np.float64)
    acci = np.zeros((dim + 2, dim + 2), dtype=np.float64)
    yr = np.zeros((dim + 2, dim + 2), dtype=np.float64)
    yi = np.zeros((dim + 2, dim + 2), dtype=np.float64)

    _record(rr, ri, nf, sf, pn, tr, mean_n, pop_x, 0, dim, rho_snaps, store_states)
    isnap = 1
    status = 0
    fail_step = -1
    half = 0.5 * dt
    sixth = dt / 6.0

    # Hermiticity holds by construction: only the upper triangle is evolved
    # and the state is mirrored on output.
    for step in range(1, n_steps + 1):
        _lindblad_rhs_upper(diag, offp, nf, sf, w, kappa, g_rd, g_pd, rr, ri, accr, acci)
        _stage_update(rr, ri, accr, acci, half, yr, yi, dim)
        _lindblad_rhs_upper(diag, offp, nf, sf, w, kappa, g_rd, g_pd, yr, yi, kr, ki)
        _stage_update_acc(rr, ri, kr, ki, accr, acci, half, yr, yi, dim)
        _lindblad_rhs_upper(diag, offp, nf, sf, w, kappa, g_rd, g_pd, yr, yi, kr, ki)
        _stage_update_acc(rr, ri, kr, ki, accr, acci, dt, yr, yi, dim)
        _lindblad_rhs_upper(diag, offp, nf, sf, w, kappa, g_rd, g_pd, yr, yi, kr, ki)
        for i in range(dim):
            for j in range(i, dim):
                rr[i, j] += sixth * (accr[i, j] + kr[i, j])
                ri[i, j] += sixth * (acci[i, j] + ki[i, j])

        top = 0.0
        for i in range(guard_start, dim):
            top += rr[i, i]
        if top > guard_tol:
            status = 1
            fail_step = step
            break

        if step % stride == 0 or step == n_steps:
            _record(rr, ri, nf, sf, pn, tr, mean_n, pop_x, isnap, dim, rho_snaps, store_states)
            snap_steps[isnap] = step
            isnap += 1

    rho_final = np.empty((dim, dim), dtype=np.complex128)
    for i in range(dim):
        rho_final[i, i] = complex(rr[i, i], 0.0)
        for j in range(i + 1, dim):
            rho_final[i, j] = complex(rr[i, j], ri[i, j])
            rho_final[j, i] = complex(rr[i, j], -ri[i, j])

    return (rho_final, snap_steps[:isnap], pn[:isnap],
            tr[:isnap], mean_n[:isnap], pop_x[:isnap],
            rho_snaps[:isnap] if store_states else rho_snaps,
            status, fail_step)


@njit(**_OPTS)
def _record(rr, ri, nf, sf, pn, tr, mean_n, pop_x, isnap, dim, rho_snaps, store_states):
    t = 0.0
    m = 0.0
    px = 0.0
    for i in range(dim):
        p = rr[i, i]
        t += p
        m += nf[i] * p
        px += sf[i] * p
        pn[isnap, i >> 1] += p
    tr[isnap] = t
    mean_n[isnap] = m
    pop_x[isnap] = px
    if store_states:
        for i in range(dim):
            rho_snaps[isnap, i, i] = complex(rr[i, i], 0.0)
            for j in range(i + 1, dim):
                rho_snaps[isnap, i, j] = complex(rr[i, j], ri[i, j])
                rho_snaps[isnap, j, i] = complex(rr[i, j], -ri[i, j])


@njit(**_OPTS)
def wigner_grid_eval(rho, re_axis, im_axis, pad):
    """W(z) = (2/pi) Tr(rho D(2z) Pi) with D matrix elements built by the
    stable two-term recurrence; workspace extends pad levels past the state."""
    nlev = rho.shape[0]
    psize = nlev + pad
    n_re = re_axis.shape[0]
    n_im = im_axis.shape[0]
    out = np.empty((n_re, n_im), dtype=np.float64)
    dmat = np.empty((psize, psize), dtype=np.complex128)
    sq = np.empty(psize, dtype=np.float64)
    for m in range(psize):
        sq[m] = np.sqrt(m)

    for a in range(n_re):
        for b in range(n_im):
            beta = 2.0 * complex(re_axis[a], im_axis[b])
            bconj = np.conj(beta)
            # first column: D[m,0] = beta^m / sqrt(m!) * exp(-|beta|^2/2)
            dmat[0, 0] = np.exp(-0.5 * (beta.real * beta.real + beta.imag * beta.imag))
            for m in range(1, psize):
                dmat[m, 0] = dmat[m - 1, 0] * beta / sq[m]
            # remaining columns: D[m,n+1] = (sqrt(m) D[m-1,n] - conj(beta) D[m,n]) / sqrt(n+1)
            for n in range(psize - 1):
                r = 1.0 / sq[n + 1]
                dmat[0, n + 1] = -bconj * dmat[0, n] * r
                for m in range(1, psize):
                    dmat[m, n + 1] = (sq[m] * dmat[m - 1, n] - bconj * dmat[m, n]) * r
            # Tr(rho D Pi) = sum_{m,n} rho[m,n] (-1)^m D[n,m]
            s = 0.0
            for m in range(nlev):
                sgn = 1.0 if (m & 1) == 0 else -1.0
                for n in range(nlev):
                    v = rho[m, n] * dmat[n, m]
                    s += sgn * v.real
            out[a, b] = (2.0 / np.pi) * s
    return out
