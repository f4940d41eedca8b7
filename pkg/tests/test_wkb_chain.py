import numpy as np
import pytest

import cavity_packets as cp
from cavity_packets.wkb_chain import (ChainSpec, cds_chain, chain_eigensolve,
                                      classify_region, decay_verification)
from cavity_packets.dressed import cds_report


def test_uniform_chain_exact_spectrum():
    m = 63
    omega0, xi = 1.7, -0.8
    spec = ChainSpec(omegas=np.full(m + 1, omega0), xi=xi)
    modes = chain_eigensolve(spec)
    k = np.arange(1, m + 2)
    expected = np.sort(omega0 + xi * np.cos(k * np.pi / (m + 2)))
    np.testing.assert_allclose(modes.eigenvalues, expected, atol=1e-9)


def test_gershgorin_bound_and_trace_identity():
    rng = np.random.default_rng(5)
    omegas = rng.normal(size=80)
    spec = ChainSpec(omegas=omegas, xi=1.3)
    modes = chain_eigensolve(spec)
    assert modes.eigenvalues.min() >= omegas.min() - 1.3 - 1e-12
    assert modes.eigenvalues.max() <= omegas.max() + 1.3 + 1e-12
    assert modes.eigenvalues.sum() == pytest.approx(
        omegas.sum(), abs=1e-8 * spec.size * np.max(np.abs(omegas)))


def test_eigenvectors_orthonormal():
    spec = cds_chain(5.0, 0.1, "-", 120)
    modes = chain_eigensolve(spec)
    gram = modes.eigenvectors.T @ modes.eigenvectors
    assert np.max(np.abs(gram - np.eye(spec.size))) < 1e-9


def test_hopping_sign_flip_is_isospectral():
    omegas = np.linspace(0, 10, 90) - np.sqrt(np.arange(90))
    a = chain_eigensolve(ChainSpec(omegas=omegas, xi=2.0))
    b = chain_eigensolve(ChainSpec(omegas=omegas, xi=-2.0))
    np.testing.assert_allclose(a.eigenvalues, b.eigenvalues, atol=1e-9)


def test_classify_region_trivial():
    spec = ChainSpec(omegas=np.full(40, 2.0), xi=0.5)
    osc, turning = classify_region(spec, 2.0)
    assert osc.all() and turning.size == 0
    osc, turning = classify_region(spec, 2.0 + 2 * 0.5)
    assert not osc.any()


def test_classify_matches_turning_points():
    f, delta = 5.0, 0.1
    spec = cds_chain(f, delta, "-", 220)
    osc, turning = classify_region(spec, -f)
    n_up = cds_report(f, delta).n_minus_up  # 100
    inside = np.nonzero(osc)[0]
    assert inside[0] == 0
    assert abs(inside[-1] - n_up) <= 2


def test_cds_chain_validation():
    with pytest.raises(ValueError):
        cds_chain(5.0, 0.1, "x", 100)
    with pytest.raises(ValueError):
        ChainSpec(omegas=np.zeros(10), xi=1.0)
    with pytest.raises(ValueError):
        ChainSpec(omegas=np.full(30, np.inf), xi=1.0)


def test_modes_near_minus_f_confined_to_wave_range():
    f, delta = 5.0, 0.1
    spec = cds_chain(f, delta, "-", 200)
    modes = chain_eigensolve(spec)
    sel = np.abs(modes.eigenvalues + f) < 0.25
    assert sel.sum() >= 3
    for k in np.nonzero(sel)[0]:
        c2 = np.abs(modes.eigenvectors[:, k]) ** 2
        assert c2[:106].sum() > 0.99  # oscillatory window [0, 100] plus margin


def test_decay_report_empty_for_uniform_chain():
    spec = ChainSpec(omegas=np.full(60, 1.0), xi=1.0)
    modes = chain_eigensolve(spec)
    report = decay_verification(modes, spec, (0.5, 1.5))
    assert report.entries == [] and report.passed


def test_decay_on_linear_ramp():
    spec = ChainSpec(omegas=0.5 * np.arange(120.0), xi=-5.0)
    modes = chain_eigensolve(spec)
    mid = float(np.median(modes.eigenvalues))
    report = decay_verification(modes, spec, (mid - 2, mid + 2))
    assert report.entries, "ramp modes must have evanescent sides"
    assert report.passed
    for e in report.entries:
        if e.right_slope is not None:
            assert e.right_slope < 0
        if e.left_slope is not None:
            assert e.left_slope > 0


def test_confinement_between_intermediate_turning_points():
    # modes near lambda = +f on the minus ladder live between the
    # intermediate and upper turning points (25 and 100 at delta = 0.2)
    f, delta = 5.0, 0.2
    spec = cds_chain(f, delta, "-", 220)
    modes = chain_eigensolve(spec)
    rep = cds_report(f, delta)
    sel = np.abs(modes.eigenvalues - f) < 0.3
    assert sel.sum() >= 2
    for k in np.nonzero(sel)[0]:
        c2 = np.abs(modes.eigenvectors[:, k]) ** 2
        lo = int(rep.n_tilde_lo) - 5
        hi = int(rep.n_tilde_hi) + 5
        assert c2[lo:hi + 1].sum() > 0.99
    report = decay_verification(modes, spec, (f - 0.3, f + 0.3))
    assert report.passed


def test_eigenvalues_stable_under_doubling():
    f, delta = 5.0, 0.2
    small = chain_eigensolve(cds_chain(f, delta, "-", 220))
    big = chain_eigensolve(cds_chain(f, delta, "-", 440))
    window = (4.5, 5.5)  # confined modes, insensitive to the far wall
    sel = small.eigenvalues[(small.eigenvalues > window[0]) & (small.eigenvalues < window[1])]
    for lam in sel:
        assert np.min(np.abs(big.eigenvalues - lam)) < 1e-6
