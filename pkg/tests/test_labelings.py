import numpy as np
import pytest

from pamber import builtin_labeling, builtin_labelings, count_distinct_labelings, enumerate_classes, labeling_from_columns
from pamber.exceptions import NotABijectionError, OrderTooLargeError, UndefinedForOrderError, WrongCountError, WrongWeightError
from pamber.labelings import distinct_class_vectors

from reference_tables import DISTINCT_LABELINGS, LABELINGS


@pytest.mark.parametrize("M, name, q, W, alpha", LABELINGS)
def test_builtin_labelings(M, name, q, W, alpha):
    L = builtin_labeling(name, M)
    assert L.pattern_indices == W
    assert L.class_vector == q
    assert L.abd_weights == alpha
    assert len(set(L.labels())) == M


def test_builtin_order_matches_table_rows():
    assert [L.name for L in builtin_labelings(8)] == ["BRGC", "FBC", "NBC", "BSGC", "AGC"]
    assert [L.name for L in builtin_labelings(4)] == ["BRGC", "NBC", "AGC"]


def test_brgc_is_gray_for_any_order():
    for M in (4, 8, 16, 64):
        L = builtin_labeling("brgc", M)
        diffs = np.abs(np.diff(L.matrix.astype(int), axis=0)).sum(axis=1)
        assert np.all(diffs == 1)
        assert len(set(L.labels())) == M


def test_nbc_counts_up():
    L = builtin_labeling("NBC", 16)
    assert L.labels() == [format(i, "04b") for i in range(16)]


def test_undefined_orders():
    for name in ("FBC", "BSGC"):
        with pytest.raises(UndefinedForOrderError):
            builtin_labeling(name, 4)
    with pytest.raises(UndefinedForOrderError):
        builtin_labeling("AGC", 16)
    with pytest.raises(UndefinedForOrderError):
        builtin_labeling("XYZ", 8)


def test_from_columns():
    L = labeling_from_columns([15, 60, 102], 8)
    assert L.labels() == builtin_labeling("BRGC", 8).labels()
    assert labeling_from_columns([15, 51, 85], 8).class_vector == (1, 5, 11)
    with pytest.raises(NotABijectionError):
        labeling_from_columns([15, 15, 60], 8)
    with pytest.raises(WrongCountError):
        labeling_from_columns([15, 60], 8)
    with pytest.raises(WrongWeightError):
        labeling_from_columns([15, 60, 7], 8)


def test_alpha_is_sum_of_class_vectors():
    classes = enumerate_classes(8)
    total = np.sum([classes[q - 1].abd_weights for q in (1, 2, 6)], axis=0)
    assert tuple(total) == builtin_labeling("BRGC", 8).abd_weights


def test_column_permutation_invariance():
    a = labeling_from_columns([15, 60, 102], 8)
    b = labeling_from_columns([102, 15, 60], 8)
    assert a.class_vector == b.class_vector and a.abd_weights == b.abd_weights
    assert set(a.pattern_indices) == set(b.pattern_indices)


@pytest.mark.parametrize("M", [4, 8])
def test_distinct_counts(M):
    assert count_distinct_labelings(M) == DISTINCT_LABELINGS[M]


def test_distinct_vectors_bruteforce_oracle():
    assert distinct_class_vectors(4) == [(1, 2), (1, 3), (2, 3)]
    assert len(distinct_class_vectors(8)) == 460


def test_distinct_refused_for_large_orders():
    with pytest.raises(OrderTooLargeError):
        count_distinct_labelings(16)
