import math

import numpy as np
import pytest

from pamber import (
    SymType,
    abd_thresholds,
    bd_thresholds,
    enumerate_classes,
    make_constellation,
    merge_snr_db,
    pattern_from_index,
    snr_from_db,
    track_bd_thresholds,
)
from pamber.exceptions import AsymmetricPatternError, WrongOrderError
from pamber.patterns import negate, reflect
from pamber.thresholds import (
    RESIDUAL_TOL,
    Method,
    bd_polynomial,
    bd_thresholds_4pam,
    bd_thresholds_8pam,
    bd_thresholds_numeric,
    polynomial_boundaries,
    polynomial_residual,
    scan_boundaries,
)

C4, C8 = make_constellation(4), make_constellation(8)


def check_invariants(ts, c):
    live = ts.live
    ks = sorted(live)
    vals = [live[k] for k in ks]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    sigma = ts.snr.noise_std if ts.snr is not None else 0.0
    for v in vals:
        assert c.points[0] - 10 * sigma < v < c.points[-1] + 10 * sigma
    for k, e in ts.entries.items():
        if e.virtual:
            assert e.partner is not None
            assert ts.entries[e.partner].value == e.value
    if ts.pattern.sym_type is not SymType.ASY:
        M = c.order
        for k in ks:
            if M - k in live:
                assert live[k] + live[M - k] == pytest.approx(0.0, abs=1e-10)


def test_abd_midpoints():
    d = C4.d
    ts = abd_thresholds(pattern_from_index(6, 4), C4)
    assert ts.values == pytest.approx({1: -2 * d, 3: 2 * d})
    assert abd_thresholds(pattern_from_index(15, 8), C8).values == {4: 0.0}
    ts = abd_thresholds(pattern_from_index(54, 8), C8)
    assert tuple(ts.entries) == (2, 4, 5, 7)
    assert ts.method is Method.ABD_MIDPOINT and not ts.virtual_indices


def test_polynomial_coefficients():
    snr = snr_from_db(2.0, C4)
    A = snr.A
    np.testing.assert_allclose(bd_polynomial(pattern_from_index(3, 4), snr), [-A, -1, 1, A], rtol=1e-14)
    snr8 = snr_from_db(2.0, C8)
    coef = bd_polynomial(pattern_from_index(15, 8), snr8)
    exps = np.round(np.log(np.abs(coef)) / snr8.log_A).astype(int)
    assert tuple(exps) == (6, 3, 1, 0, 0, 1, 3, 6)
    p = pattern_from_index(105, 8)
    np.testing.assert_array_equal(bd_polynomial(negate(p), snr8), -bd_polynomial(p, snr8))


@pytest.mark.parametrize("w", [85, 165, 105, 30, 86, 45])
@pytest.mark.parametrize("db", [3.0, 8.0, 14.0])
def test_polynomial_roots_match_scan(w, db):
    p = pattern_from_index(w, 8)
    snr = snr_from_db(db, C8)
    scan = scan_boundaries(p, snr, C8)
    poly = polynomial_boundaries(p, snr)
    assert len(scan) == len(poly)
    np.testing.assert_allclose(scan, poly, atol=1e-9)
    for b in scan:
        assert polynomial_residual(p, snr, b) < RESIDUAL_TOL


def test_numeric_examples():
    for db in (-10.0, 0.0, 10.0, 25.0):
        b = scan_boundaries(pattern_from_index(3, 4), snr_from_db(db, C4), C4)
        np.testing.assert_allclose(b, [0.0], atol=1e-12)
    p85 = pattern_from_index(85, 8)
    ts = bd_thresholds_numeric(p85, snr_from_db(5.5, C8), C8)
    assert len(ts.live) == 7 and not ts.virtual_indices
    ts = bd_thresholds_numeric(p85, snr_from_db(4.0, C8), C8)
    assert sorted(ts.live) == [3, 4, 5]
    assert sorted(ts.virtual_indices) == [1, 2, 6, 7]
    check_invariants(ts, C8)


def test_scan_invariant_under_negation():
    for w in (30, 86, 165, 45):
        p = pattern_from_index(w, 8)
        for db in (1.0, 6.0):
            snr = snr_from_db(db, C8)
            np.testing.assert_array_equal(scan_boundaries(p, snr, C8), scan_boundaries(negate(p), snr, C8))


def test_4pam_closed_form():
    ts = bd_thresholds_4pam(pattern_from_index(3, 4), snr_from_db(-7.0, C4), C4)
    assert ts.values == {2: 0.0}
    rho_merge = 5 * math.log(3) / 8
    p5 = pattern_from_index(5, 4)
    above = bd_thresholds_4pam(p5, snr_from_db(10 * math.log10(rho_merge) + 1e-3, C4), C4)
    below = bd_thresholds_4pam(p5, snr_from_db(10 * math.log10(rho_merge) - 1e-3, C4), C4)
    assert not above.virtual_indices and above.values[3] > 0
    assert set(below.virtual_indices) == {1, 3}
    assert below.entries[1].partner == 2 and below.values[1] == 0.0
    ts = bd_thresholds_4pam(pattern_from_index(6, 4), snr_from_db(40.0, C4), C4)
    assert ts.values[3] == pytest.approx(2 * C4.d, abs=1e-4)
    with pytest.raises(WrongOrderError):
        bd_thresholds_4pam(pattern_from_index(15, 8), snr_from_db(0.0, C8), C8)


def test_4pam_virtual_pair_without_middle_threshold():
    # p_6 has K = {1, 3}; below its merge SNR the pair partners itself.
    p6 = pattern_from_index(6, 4)
    ts = bd_thresholds_4pam(p6, snr_from_db(-20.0, C4), C4)
    if ts.virtual_indices:
        assert ts.entries[1].partner == 3 and ts.entries[3].partner == 1
    check_invariants(ts, C4)


def test_8pam_closed_form_structure():
    p = pattern_from_index(165, 8)
    ts = bd_thresholds_8pam(p, snr_from_db(8.0, C8), C8)
    inter = ts.intermediates
    assert max(inter.t_residuals) < 1e-9
    assert max(inter.z_residuals) < 1e-9
    check_invariants(ts, C8)
    # beta_7 = f(t_1), beta_6 = f(t_3), beta_5 = f(t_2)
    for k, n in ((7, 1), (6, 3), (5, 2)):
        t = inter.t[n - 1].real
        f = math.log((t + math.sqrt(t * t - 4)) / 2) / (4 * ts.snr.rho * C8.d)
        assert ts.values[k] == pytest.approx(f, rel=1e-12)


def test_8pam_errors():
    with pytest.raises(AsymmetricPatternError):
        bd_thresholds_8pam(pattern_from_index(30, 8), snr_from_db(5.0, C8), C8)
    with pytest.raises(WrongOrderError):
        bd_thresholds_8pam(pattern_from_index(5, 4), snr_from_db(5.0, C4), C4)
    with pytest.raises(WrongOrderError):
        bd_thresholds(pattern_from_index(45745, 16), snr_from_db(5.0, make_constellation(16)), method="closed")


def aligned_close(a, b, tol):
    """Same virtual flags and the same live thresholds.

    Values of virtual entries are a convention (any common value of a merged
    pair gives the same PBER) and are not compared.
    """
    assert set(a.entries) == set(b.entries)
    for k in a.entries:
        assert a.entries[k].virtual == b.entries[k].virtual, k
        if not a.entries[k].virtual:
            assert a.entries[k].value == pytest.approx(b.entries[k].value, abs=tol), k


@pytest.mark.parametrize("M", [4, 8])
def test_closed_form_matches_scan_sparse_grid(M):
    c = make_constellation(M)
    grid = np.arange(-5.0, 15.01, 1.0)
    for cls in enumerate_classes(M):
        if cls.sym_type is SymType.ASY:
            continue
        for p in cls.members:
            tracked = track_bd_thresholds(p, c, grid, cross_check=True)
            for db, ts in zip(grid, tracked):
                closed = bd_thresholds(p, snr_from_db(db, c), c, method="closed")
                aligned_close(closed, ts, 1e-8)
                check_invariants(closed, c)


def test_reflected_member_thresholds_mirror_representative():
    rep = pattern_from_index(165, 8)
    other = pattern_from_index(90, 8)
    snr = snr_from_db(7.0, C8)
    a = bd_thresholds(rep, snr, C8, method="closed").values
    b = bd_thresholds(other, snr, C8, method="closed").values
    # 90 is the negation of 165, so boundaries coincide.
    assert a == pytest.approx(b, abs=1e-12)
    p = pattern_from_index(113, 8)
    r = reflect(p)
    a = bd_thresholds(p, snr, C8, method="closed").values
    b = bd_thresholds(r, snr, C8, method="closed").values
    for k in a:
        assert b[8 - k] == pytest.approx(-a[k], abs=1e-12)


def test_merge_snrs():
    p = pattern_from_index(5, 4)
    expected = 10 * math.log10(5 * math.log(3) / 8)
    assert merge_snr_db(p, -3, 0, C4) == pytest.approx(expected, abs=1e-5)
    assert merge_snr_db(pattern_from_index(165, 8), 4, 6, C8) == pytest.approx(5.3, abs=0.1)
    p85 = pattern_from_index(85, 8)
    hi = merge_snr_db(p85, 3.5, 5.5, C8, method="scan")
    lo = merge_snr_db(p85, 1.0, 3.5, C8, method="scan")
    assert hi == pytest.approx(4.9, abs=0.1) and lo == pytest.approx(2.2, abs=0.1)
    assert merge_snr_db(p85, 3.5, 5.5, C8, method="closed", k=1) == pytest.approx(hi, abs=1e-4)
    assert merge_snr_db(p85, 1.0, 3.5, C8, method="closed", k=3) == pytest.approx(lo, abs=1e-4)


def test_p85_partners_below_inner_merge():
    ts = bd_thresholds(pattern_from_index(85, 8), snr_from_db(2.0, C8), C8, method="scan")
    assert ts.entries[3].partner == 4 and ts.entries[5].partner == 4
    assert ts.values[3] == ts.values[4] == ts.values[5] == pytest.approx(0.0, abs=1e-12)


def test_tracking_16pam():
    c = make_constellation(16)
    p = pattern_from_index(45745, 16)
    grid = np.arange(0.0, 12.01, 0.5)
    sets = track_bd_thresholds(p, c, grid)
    for ts in sets:
        check_invariants(ts, c)
    assert len(sets[-1].live) <= len(p.threshold_indices)
    for ts, db in zip(sets, grid):
        assert len(ts.live) == len(scan_boundaries(p, snr_from_db(db, c), c))


def test_tracking_preserves_input_order():
    p = pattern_from_index(86, 8)
    grid = [7.0, -2.0, 3.5, 7.0]
    sets = track_bd_thresholds(p, C8, grid)
    assert [round(ts.snr.db, 9) for ts in sets] == grid
    assert sets[0].values == sets[3].values


@pytest.mark.parametrize("M", [4, 8])
def test_high_snr_midpoints(M):
    c = make_constellation(M)
    snr = snr_from_db(30.0, c)
    for cls in enumerate_classes(M):
        for p in cls.members:
            ts = bd_thresholds(p, snr, c)
            mids = abd_thresholds(p, c).values
            assert not ts.virtual_indices
            assert max(abs(ts.values[k] - mids[k]) for k in mids) <= 0.01 * c.d
