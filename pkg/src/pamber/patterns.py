"""Bit patterns: indexing, reflection/negation, symmetry classes and ABD weights.

A pattern is one column of a labeling: a length-M bit vector with exactly M/2
ones, indexed by its big-endian integer value ``w``. Positions and threshold
indices are 1-based throughout to keep ``beta_k`` readable.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .constellation import check_order
from .exceptions import OrderTooLargeError, OutOfRangeError, WrongWeightError

MAX_ENUMERATION_ORDER = 16


class SymType(str, enum.Enum):
    RE = "RE"
    ARE = "ARE"
    ASY = "ASY"


@dataclass(frozen=True)
class Pattern:
    bits: tuple[int, ...]

    def __post_init__(self):
        if sum(self.bits) * 2 != len(self.bits):
            raise WrongWeightError(f"pattern {self.bits} does not have weight {len(self.bits) // 2}")

    @property
    def order(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        w = 0
        for b in self.bits:
            w = (w << 1) | b
        return w

    @property
    def bipolar(self) -> tuple[int, ...]:
        """``2 p_i - 1`` for each position."""
        return tuple(2 * b - 1 for b in self.bits)

    @property
    def threshold_indices(self) -> tuple[int, ...]:
        """Indices ``k`` (1-based) with ``p_k != p_{k+1}``."""
        p = self.bits
        return tuple(k for k in range(1, len(p)) if p[k - 1] != p[k])

    @property
    def sym_type(self) -> SymType:
        return classify_symmetry(self)

    def __str__(self):
        return "".join(map(str, self.bits))

    def __repr__(self):
        return f"Pattern(p_{self.index}=[{','.join(map(str, self.bits))}])"


def pattern_from_index(w: int, order: int) -> Pattern:
    order = check_order(order, minimum=2)
    if not 0 <= w < 2**order:
        raise OutOfRangeError(f"index {w} out of range for order {order}")
    bits = tuple((w >> (order - 1 - i)) & 1 for i in range(order))
    return Pattern(bits)


def as_pattern(p, order: int | None = None) -> Pattern:
    """Coerce a :class:`Pattern`, an index (needs ``order``) or a bit sequence."""
    if isinstance(p, Pattern):
        return p
    if isinstance(p, (int,)) and not isinstance(p, bool):
        if order is None:
            raise TypeError("an integer pattern index needs the constellation order")
        return pattern_from_index(p, order)
    return Pattern(tuple(int(b) for b in p))


def reflect(p: Pattern) -> Pattern:
    return Pattern(p.bits[::-1])


def negate(p: Pattern) -> Pattern:
    return Pattern(tuple(1 - b for b in p.bits))


def classify_symmetry(p: Pattern) -> SymType:
    r = p.bits[::-1]
    if r == p.bits:
        return SymType.RE
    if all(a != b for a, b in zip(r, p.bits)):
        return SymType.ARE
    return SymType.ASY


def orbit(p: Pattern) -> frozenset[int]:
    """Indices of ``{p, negate(p), reflect(p), negate(reflect(p))}``."""
    r = reflect(p)
    return frozenset(q.index for q in (p, negate(p), r, negate(r)))


def abd_weights(p: Pattern) -> tuple[int, ...]:
    """Integer weights ``a_1..a_{M-1}`` of the max-log PBER expansion.

    ``P = (1/M) sum_n a_n Q((2n-1) d sqrt(2 rho))``.
    """
    M = p.order
    b = (None,) + p.bits  # 1-based
    a = []
    for n in range(1, M):
        total = 0
        for k in range(n, M):
            total += (b[k + 1] - b[k]) * (1 - 2 * b[k + 1 - n])
            total -= (b[k + 2 - n] - b[k + 1 - n]) * (1 - 2 * b[k + 1])
        a.append(total)
    return tuple(a)


@dataclass(frozen=True)
class PatternClass:
    class_id: int
    representative: Pattern
    member_indices: tuple[int, ...]
    sym_type: SymType
    abd_weights: tuple[int, ...]

    @property
    def members(self) -> tuple[Pattern, ...]:
        M = self.representative.order
        return tuple(pattern_from_index(w, M) for w in self.member_indices)


# Table representatives that are not the smallest member index.
_REPRESENTATIVE_OVERRIDES = {8: {frozenset({23, 232}): 232, frozenset({90, 165}): 165}}


def _pick_representative(members: frozenset[int], order: int) -> int:
    override = _REPRESENTATIVE_OVERRIDES.get(order, {}).get(members)
    if override is not None:
        return override
    # The smallest index always starts with a 0 bit because negation flips it.
    return min(members)


@lru_cache(maxsize=None)
def _enumerate_classes(order: int) -> tuple[PatternClass, ...]:
    seen: set[int] = set()
    orbits = []
    for ones in itertools.combinations(range(order), order // 2):
        w = sum(1 << (order - 1 - i) for i in ones)
        if w in seen:
            continue
        members = orbit(pattern_from_index(w, order))
        seen.update(members)
        orbits.append(members)

    rows = []
    for members in orbits:
        rep = pattern_from_index(_pick_representative(members, order), order)
        rows.append((rep, members, classify_symmetry(rep), abd_weights(rep)))
    # Symmetric classes first, then ASY; each block best-first by the a-vector.
    rows.sort(key=lambda r: (r[2] is SymType.ASY, r[3], min(r[1])))
    return tuple(
        PatternClass(
            class_id=q,
            representative=rep,
            member_indices=tuple(sorted(members)),
            sym_type=sym,
            abd_weights=a,
        )
        for q, (rep, members, sym, a) in enumerate(rows, start=1)
    )


def enumerate_classes(order: int) -> list[PatternClass]:
    """All pattern classes for ``order``-PAM, numbered in table order.

    Classes containing RE or ARE patterns come first, followed by the ASY
    classes. Within each block classes are sorted by their ABD weight vector,
    lexicographically ascending (best high-SNR PBER first); ties fall back to
    the smallest member index.
    """
    order = check_order(order)
    if order > MAX_ENUMERATION_ORDER:
        raise OrderTooLargeError(
            f"exhaustive class enumeration is limited to order <= {MAX_ENUMERATION_ORDER}"
        )
    return list(_enumerate_classes(order))


@lru_cache(maxsize=None)
def class_lookup(order: int) -> dict[int, PatternClass]:
    """Map every pattern index to its class."""
    return {w: cls for cls in enumerate_classes(order) for w in cls.member_indices}


def class_of(p: Pattern) -> PatternClass:
    return class_lookup(p.order)[p.index]


def class_counts(order: int) -> tuple[int, int, int, int]:
    """Closed-form ``(Q, Q_RE, Q_ARE, Q_ASY)``."""
    M = check_order(order)
    total = math.comb(M, M // 2)
    sym = math.comb(M // 2, M // 4)
    q = (total + sym + 2 ** (M // 2)) // 4
    q_re = sym // 2
    q_are = 2 ** (M // 2 - 1)
    return q, q_re, q_are, q - q_re - q_are
