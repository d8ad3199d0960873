import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from pamber import (
    abd_thresholds,
    bd_thresholds,
    ber_labeling,
    ber_labeling_abd_by_patterns,
    builtin_labeling,
    builtin_labelings,
    enumerate_classes,
    labeling_from_columns,
    make_constellation,
    pattern_from_index,
    pber,
    pber_abd,
    pber_closed_form,
    pber_curve,
    pber_from_regions,
    q_function,
    snr_from_db,
)
from pamber.ber import BerExpansion, alternating_labels, pber_bd_scan
from pamber.exceptions import InconsistentLabelsError, UnresolvedVirtualError
from pamber.llr import subsets
from pamber.thresholds import ThresholdEntry, ThresholdSet

C4, C8 = make_constellation(4), make_constellation(8)


def bd_pber_oracle(p, snr, c):
    """Optimal bitwise error probability: integral of min(f0, f1).

    The integrand is smooth between crossings of the two mixture densities,
    which are located on a fine grid and integrated piecewise.
    """
    x0, x1 = subsets(p, c)
    s = snr.noise_std
    k = 1.0 / (c.order * s * math.sqrt(2 * math.pi))

    def dens(y, xs):
        return k * math.fsum(math.exp(-((y - x) ** 2) / (2 * s * s)) for x in xs)

    def gap(y):
        return dens(y, x1) - dens(y, x0)

    lo, hi = c.points[0] - 12 * s, c.points[-1] + 12 * s
    ys = np.linspace(lo, hi, 20001)
    grid = lambda xs: np.exp(-((ys[:, None] - xs) ** 2) / (2 * s * s)).sum(axis=1)  # noqa: E731
    pos = grid(x1) - grid(x0) >= 0
    cuts = [brentq(gap, ys[i], ys[i + 1], xtol=1e-15) for i in np.flatnonzero(pos[:-1] != pos[1:])]
    edges = [lo, *cuts, hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        xs = x0 if gap(0.5 * (a + b)) > 0 else x1
        total += quad(dens, a, b, args=(xs,), epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    return total


def test_expansion_structure():
    for w in (15, 165, 86, 45):
        p = pattern_from_index(w, 8)
        g = BerExpansion.of(p).g
        nonzero = {k + 1 for k in range(7) if np.any(g[:, k] != 0)}
        assert nonzero == set(p.threshold_indices)
        assert set(np.unique(g)) <= {-1, 0, 1}
        e = BerExpansion.of(p).e
        assert np.array_equal(e, e.T) and not e.diagonal().any()
        v = BerExpansion.of(p).region_probabilities(np.sort(np.random.default_rng(w).normal(size=7)),
                                                    snr_from_db(3.0, C8), C8)
        np.testing.assert_allclose(v.sum(axis=1), 1.0, atol=1e-12)


def test_q1_pattern_bd_equals_abd():
    p = pattern_from_index(15, 8)
    for db in (-5.0, 0.0, 7.0, 15.0):
        snr = snr_from_db(db, C8)
        x = C8.d * math.sqrt(2 * snr.rho)
        expected = sum(2 * q_function(n * x) for n in (1, 3, 5, 7)) / 8
        assert pber(p, "bd", snr, C8) == pytest.approx(expected, rel=1e-13)
        assert pber(p, "abd", snr, C8) == pber(p, "bd", snr, C8)


def test_virtual_pair_shift_cancels():
    p = pattern_from_index(165, 8)
    snr = snr_from_db(4.0, C8)
    ts = bd_thresholds(p, snr, C8)
    assert set(ts.virtual_indices) == {2, 3, 5, 6}
    base = pber_closed_form(p, ts, snr, C8)
    for delta in (-0.3, 0.1, 0.7):
        ent = dict(ts.entries)
        for k in (2, 3):
            ent[k] = ThresholdEntry(ent[k].value + delta, True, ent[k].partner)
        moved = ThresholdSet(p, snr, ent, ts.method)
        assert pber_closed_form(p, moved, snr, C8) == pytest.approx(base, abs=1e-15)


def test_unresolved_virtual():
    p = pattern_from_index(165, 8)
    snr = snr_from_db(4.0, C8)
    ts = bd_thresholds(p, snr, C8)
    ent = dict(ts.entries)
    ent[2] = ThresholdEntry(ent[2].value + 0.1, True, 3)
    with pytest.raises(UnresolvedVirtualError):
        pber_closed_form(p, ThresholdSet(p, snr, ent, ts.method), snr, C8)


def test_regions_examples():
    p = pattern_from_index(3, 4)
    snr = snr_from_db(2.0, C4)
    x = C4.d * math.sqrt(2 * snr.rho)
    expected = (2 * q_function(3 * x) + 2 * q_function(x)) / 4
    assert pber_from_regions(p, [0.0], [0, 1], snr, C4) == pytest.approx(expected, rel=1e-14)
    assert pber_from_regions(pattern_from_index(6, 4), [], [0], snr, C4) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(InconsistentLabelsError):
        pber_from_regions(p, [0.0], [1, 0], snr, C4)
    with pytest.raises(InconsistentLabelsError):
        pber_from_regions(p, [0.0], [0, 1, 0], snr, C4)
    with pytest.raises(InconsistentLabelsError):
        pber_from_regions(pattern_from_index(5, 4), [0.5, -0.5, 0.0], [0, 1, 0, 1], snr, C4)


def test_abd_examples():
    snr = snr_from_db(5.0, C4)
    x = C4.d * math.sqrt(2 * snr.rho)
    assert pber_abd(pattern_from_index(3, 4), snr, C4) == pytest.approx(
        (2 * q_function(x) + 2 * q_function(3 * x)) / 4, rel=1e-14)
    p = pattern_from_index(102, 8)
    snr = snr_from_db(10.0, C8)
    x = C8.d * math.sqrt(2 * snr.rho)
    a = (8, 6, -6, -4, 4, 2, -2)
    direct = sum(ai * q_function((2 * n + 1) * x) for n, ai in enumerate(a)) / 8
    assert pber_abd(p, snr, C8) == pytest.approx(direct, abs=1e-15)
    assert pber_closed_form(p, abd_thresholds(p, C8), snr, C8) == pytest.approx(direct, abs=1e-12)


@pytest.mark.parametrize("db", [-3.0, 2.0, 6.0, 10.0])
def test_bd_matches_integral_oracle(db):
    # Independent of L-values and thresholds: only mixture densities are used.
    snr = snr_from_db(db, C8)
    for cls in enumerate_classes(8):
        p = cls.representative
        assert pber(p, "bd", snr, C8) == pytest.approx(bd_pber_oracle(p, snr, C8), abs=1e-9)
    snr4 = snr_from_db(db, C4)
    for cls in enumerate_classes(4):
        assert pber(cls.representative, "bd", snr4, C4) == pytest.approx(
            bd_pber_oracle(cls.representative, snr4, C4), abs=1e-9)


def test_closed_and_scan_agree():
    for w in (23, 113, 165, 85, 43):
        p = pattern_from_index(w, 8)
        for db in (0.0, 2.2, 4.0, 5.3, 9.0):
            snr = snr_from_db(db, C8)
            assert pber(p, "bd", snr, C8, method="closed") == pytest.approx(pber_bd_scan(p, snr, C8), abs=1e-12)


def test_class_invariance_and_ordering():
    for M, c in ((4, C4), (8, C8)):
        for db in (1.0, 8.0):
            snr = snr_from_db(db, c)
            for cls in enumerate_classes(M):
                vals_bd = [pber(m, "bd", snr, c) for m in cls.members]
                vals_abd = [pber(m, "abd", snr, c) for m in cls.members]
                assert max(vals_bd) - min(vals_bd) <= 1e-12
                assert max(vals_abd) - min(vals_abd) <= 1e-12
                assert 0 <= vals_bd[0] <= vals_abd[0] + 1e-12 <= 0.5 + 1e-12


def test_monotone_in_snr():
    grid = np.arange(-5.0, 15.01, 0.5)
    for w in (165, 85, 46, 89):
        p = pattern_from_index(w, 8)
        for demod in ("bd", "abd"):
            curve = pber_curve(p, demod, grid, C8)
            assert np.all(np.diff(curve) < 0)
    tracked = pber_curve(pattern_from_index(46, 8), "bd", grid, C8, method="tracked")
    np.testing.assert_allclose(tracked, pber_curve(pattern_from_index(46, 8), "bd", grid, C8), atol=1e-12)


def test_alternating_labels():
    assert alternating_labels(pattern_from_index(85, 8), 3) == [0, 1, 0, 1]


def test_labeling_ber():
    for L in builtin_labelings(8) + builtin_labelings(4):
        c = make_constellation(L.order)
        for db in (0.0, 6.0, 12.0):
            snr = snr_from_db(db, c)
            abd = ber_labeling(L, "abd", snr, c)
            assert abd == pytest.approx(ber_labeling_abd_by_patterns(L, snr, c), abs=1e-12)
            assert ber_labeling(L, "bd", snr, c) <= abd + 1e-12
        snr = snr_from_db(30.0, c)
        bd, abd = ber_labeling(L, "bd", snr, c), ber_labeling(L, "abd", snr, c)
        assert (abd - bd) / abd < 1e-3


def test_equal_class_vectors_give_equal_ber():
    a = builtin_labeling("BRGC", 8)
    b = labeling_from_columns([240, 195, 153], 8)  # other members of classes 1, 2, 6
    assert a.class_vector == b.class_vector and a.abd_weights == b.abd_weights
    for db in (2.0, 9.0):
        snr = snr_from_db(db, C8)
        for demod in ("bd", "abd"):
            assert ber_labeling(a, demod, snr, C8) == pytest.approx(ber_labeling(b, demod, snr, C8), abs=1e-12)


def test_high_snr_ranking_follows_table_rows():
    # NBC and BSGC share alpha_1 and only separate at moderate SNR.
    for db in (8.0, 10.0, 12.0):
        snr = snr_from_db(db, C8)
        vals = [ber_labeling(L, "bd", snr, C8) for L in builtin_labelings(8)]
        assert vals == sorted(vals)
    alphas = [L.abd_weights for L in builtin_labelings(8)]
    assert alphas == sorted(alphas)
