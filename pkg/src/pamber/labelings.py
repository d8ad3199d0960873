"""Binary labelings of M-PAM and their decomposition into pattern classes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .constellation import check_order
from .exceptions import (
    NotABijectionError,
    OrderTooLargeError,
    UndefinedForOrderError,
    WrongCountError,
)
from .patterns import Pattern, abd_weights, class_lookup, pattern_from_index

BUILTIN_NAMES = ("BRGC", "NBC", "FBC", "BSGC", "AGC")

# Pattern sets for labelings without a general construction.
_TABULATED = {
    ("AGC", 4): (5, 6),
    ("FBC", 8): (15, 60, 90),
    ("BSGC", 8): (105, 60, 102),
    ("AGC", 8): (90, 105, 85),
}


@dataclass(frozen=True)
class Labeling:
    """An M x m binary labeling; row ``i`` is the label of point ``s_i``."""

    name: str
    matrix: np.ndarray

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    @property
    def bits_per_symbol(self) -> int:
        return self.matrix.shape[1]

    @property
    def patterns(self) -> tuple[Pattern, ...]:
        return tuple(Pattern(tuple(int(b) for b in col)) for col in self.matrix.T)

    @property
    def pattern_indices(self) -> tuple[int, ...]:
        """Column pattern indices in column order."""
        return tuple(p.index for p in self.patterns)

    @property
    def class_vector(self) -> tuple[int, ...]:
        lookup = class_lookup(self.order)
        return tuple(sorted(lookup[w].class_id for w in self.pattern_indices))

    @property
    def abd_weights(self) -> tuple[int, ...]:
        """``alpha``: componentwise sum of the columns' ABD weight vectors."""
        total = np.zeros(self.order - 1, dtype=int)
        for p in self.patterns:
            total += abd_weights(p)
        return tuple(int(v) for v in total)

    def labels(self) -> list[str]:
        return ["".join(map(str, row)) for row in self.matrix]


def _column_matrix(columns, order: int) -> np.ndarray:
    cols = [pattern_from_index(int(w), order).bits for w in columns]
    return np.array(cols, dtype=np.int8).T


def labeling_from_columns(columns, order: int, name: str = "custom") -> Labeling:
    """Build a labeling whose j-th column is the pattern ``columns[j]``."""
    order = check_order(order)
    m = order.bit_length() - 1
    columns = list(columns)
    if len(columns) != m:
        raise WrongCountError(f"{order}-PAM needs {m} patterns, got {len(columns)}")
    matrix = _column_matrix(columns, order)  # raises WrongWeightError
    if len({tuple(r) for r in matrix}) != order:
        raise NotABijectionError(f"patterns {columns} do not give {order} distinct labels")
    matrix.setflags(write=False)
    return Labeling(name=name, matrix=matrix)


def _brgc_rows(m: int) -> list[int]:
    rows = [0]
    for j in range(m):
        rows = rows + [r | (1 << j) for r in reversed(rows)]
    return rows


def _rows_to_matrix(rows, m: int) -> np.ndarray:
    return np.array([[(r >> (m - 1 - j)) & 1 for j in range(m)] for r in rows], dtype=np.int8)


def builtin_labeling(name: str, order: int) -> Labeling:
    """One of the standard labelings BRGC, NBC, FBC, BSGC or AGC.

    BRGC and NBC are built recursively for any order; FBC, BSGC and AGC are
    only tabulated for the orders where their pattern sets are known.
    """
    key = name.upper()
    order = check_order(order)
    m = order.bit_length() - 1
    if key == "BRGC":
        matrix = _rows_to_matrix(_brgc_rows(m), m)
    elif key == "NBC":
        matrix = _rows_to_matrix(range(order), m)
    elif (key, order) in _TABULATED:
        return labeling_from_columns(_TABULATED[key, order], order, name=key)
    elif key in BUILTIN_NAMES:
        raise UndefinedForOrderError(f"{key} is not defined for {order}-PAM")
    else:
        raise UndefinedForOrderError(f"unknown labeling {name!r}")
    matrix.setflags(write=False)
    return Labeling(name=key, matrix=matrix)


def builtin_labelings(order: int) -> list[Labeling]:
    """All builtin labelings defined for ``order``, in table order (best BER first)."""
    table_order = {4: ("BRGC", "NBC", "AGC"), 8: ("BRGC", "FBC", "NBC", "BSGC", "AGC")}
    names = table_order.get(order, ("BRGC", "NBC"))
    return [builtin_labeling(n, order) for n in names]


def count_distinct_labelings(order: int) -> tuple[int, int]:
    """``(number of valid labelings, number of distinct class vectors)``.

    Enumerates every assignment of the M binary labels to the M points.
    """
    order = check_order(order)
    if order > 8:
        raise OrderTooLargeError("exhaustive labeling enumeration is limited to order <= 8")
    m = order.bit_length() - 1
    lookup = class_lookup(order)
    class_of_index = np.zeros(2**order, dtype=np.int64)
    for w, cls in lookup.items():
        class_of_index[w] = cls.class_id

    perms = np.array(list(itertools.permutations(range(order))), dtype=np.int64)
    weights = 1 << np.arange(order - 1, -1, -1, dtype=np.int64)
    q = np.empty((len(perms), m), dtype=np.int64)
    for j in range(m):
        col_bits = (perms >> (m - 1 - j)) & 1
        q[:, j] = class_of_index[col_bits @ weights]
    q.sort(axis=1)
    distinct = np.unique(q, axis=0)
    assert len(perms) == math.factorial(order)
    return len(perms), len(distinct)


def distinct_class_vectors(order: int) -> list[tuple[int, ...]]:
    """Sorted list of the distinct class vectors over all labelings (order <= 8)."""
    order = check_order(order)
    if order > 8:
        raise OrderTooLargeError("exhaustive labeling enumeration is limited to order <= 8")
    m = order.bit_length() - 1
    lookup = class_lookup(order)
    seen = set()
    for perm in itertools.permutations(range(order)):
        cols = []
        for j in range(m):
            w = 0
            for label in perm:
                w = (w << 1) | ((label >> (m - 1 - j)) & 1)
            cols.append(lookup[w].class_id)
        seen.add(tuple(sorted(cols)))
    return sorted(seen)
