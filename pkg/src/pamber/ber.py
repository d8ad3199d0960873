"""Analytic PBER and BER of the BD and ABD for M-PAM.

Three evaluations of the error probability of one pattern are available:

* :func:`pber_closed_form` -- the Q-function expansion over the threshold
  indices, valid for BD and ABD threshold sets once virtual thresholds carry
  their partner's value;
* :func:`pber_from_regions` -- direct sum over decision regions, used for
  numerically obtained boundaries and as an independent check;
* :func:`pber_abd` -- the integer-weight expansion of the max-log PBER.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constellation import Constellation, Snr, make_constellation, q_function, snr_from_db
from .exceptions import InconsistentLabelsError, UnresolvedVirtualError
from .labelings import Labeling
from .patterns import Pattern, abd_weights
from .thresholds import (
    ThresholdSet,
    abd_thresholds,
    bd_thresholds,
    closed_form_available,
    scan_boundaries,
    track_bd_thresholds,
)

BD, ABD = "bd", "abd"


@dataclass(frozen=True)
class BerExpansion:
    """Coefficient matrices of the PBER expansion for one pattern.

    ``g[i, k-1] = (p_{k+1} - p_k)(1 - 2 p_i)`` and ``e[i, k] = p_i xor p_k``.
    """

    g: np.ndarray
    e: np.ndarray

    @classmethod
    def of(cls, p: Pattern) -> "BerExpansion":
        b = np.asarray(p.bits, dtype=int)
        g = np.outer(1 - 2 * b, b[1:] - b[:-1])
        e = b[:, None] ^ b[None, :]
        return cls(g=g, e=e)

    def region_probabilities(self, thresholds, snr: Snr, c: Constellation) -> np.ndarray:
        """``v[i, k]``: probability that ``Y`` falls in the k-th inter-threshold cell given ``s_i``.

        ``thresholds`` holds all ``M-1`` cell edges in ascending order.
        """
        edges = np.concatenate([[-np.inf], np.asarray(thresholds, dtype=float), [np.inf]])
        return _interval_probabilities(edges, snr, c)


def _interval_probabilities(edges: np.ndarray, snr: Snr, c: Constellation) -> np.ndarray:
    """``Pr{edges[j] < Y <= edges[j+1] | X = s_i}`` for every point and cell."""
    scale = math.sqrt(2.0 * snr.rho)
    u = (edges[None, :] - c.points[:, None]) * scale
    # Integrate on the side of the mean where the tail is small to limit cancellation.
    upper = q_function(u)  # Pr{Y > edge}
    lower = q_function(-u)  # Pr{Y <= edge}
    above = upper[:, :-1] - upper[:, 1:]
    below = lower[:, 1:] - lower[:, :-1]
    use_below = u[:, 1:] <= 0
    return np.where(use_below, below, above)


def _resolved_values(ts: ThresholdSet) -> dict[int, float]:
    vals = ts.values
    for k, e in ts.entries.items():
        if e.virtual:
            if e.partner is None or e.partner not in vals or vals[e.partner] != e.value:
                raise UnresolvedVirtualError(f"virtual threshold beta_{k} does not match its partner")
    return vals


def pber_closed_form(p: Pattern, ts: ThresholdSet, snr: Snr, c: Constellation) -> float:
    """``1/2 + (1/M) sum_i sum_{k in K} g_ik Q((beta_k - s_i) sqrt(2 rho))``."""
    vals = _resolved_values(ts)
    K = p.threshold_indices
    g = BerExpansion.of(p).g[:, [k - 1 for k in K]]
    beta = np.array([vals[k] for k in K])
    u = (beta[None, :] - c.points[:, None]) * math.sqrt(2.0 * snr.rho)
    # Q(u) = 1 - Q(-u) for u < 0: the constants add up to an exact integer,
    # leaving only small tail terms, so high-SNR values do not cancel against 1/2.
    neg = u < 0
    const = p.order // 2 + int(np.sum(g[neg]))
    tails = float(np.sum(np.where(neg, -g, g) * q_function(np.abs(u))))
    return (const + tails) / p.order


def pber_from_regions(p: Pattern, boundaries, region_labels, snr: Snr, c: Constellation) -> float:
    """``(1/M) sum_i Pr{Y in region with label != p_i | X = s_i}``.

    ``boundaries`` are ascending and split the line into
    ``len(boundaries) + 1`` regions with the given decided bits.
    """
    boundaries = np.asarray(boundaries, dtype=float)
    labels = np.asarray(region_labels, dtype=int)
    if len(labels) != len(boundaries) + 1:
        raise InconsistentLabelsError("need exactly one label per region")
    if labels[0] != p.bits[0] or labels[-1] != p.bits[-1]:
        raise InconsistentLabelsError("outer regions must decide p_1 and p_M")
    if np.any(np.diff(boundaries) < 0):
        raise InconsistentLabelsError("boundaries must be ascending")
    edges = np.concatenate([[-np.inf], boundaries, [np.inf]])
    v = _interval_probabilities(edges, snr, c)
    wrong = labels[None, :] != np.asarray(p.bits)[:, None]
    return float(np.sum(np.where(wrong, v, 0.0))) / p.order


def alternating_labels(p: Pattern, n_boundaries: int) -> list[int]:
    """Region labels for ``n`` sign changes starting from ``p_1`` on the left."""
    return [(p.bits[0] + j) % 2 for j in range(n_boundaries + 1)]


def pber_bd_scan(p: Pattern, snr: Snr, c: Constellation) -> float:
    """BD PBER straight from the L-value zero crossings (no virtual bookkeeping)."""
    b = scan_boundaries(p, snr, c)
    return pber_from_regions(p, b, alternating_labels(p, len(b)), snr, c)


def pber_abd(p: Pattern, snr: Snr, c: Constellation) -> float:
    """``(1/M) sum_n a_n Q((2n-1) d sqrt(2 rho))``."""
    a = np.asarray(abd_weights(p), dtype=float)
    return _weighted_q_sum(a, snr, c) / p.order


def _weighted_q_sum(weights: np.ndarray, snr: Snr, c: Constellation) -> float:
    n = np.arange(1, len(weights) + 1)
    return float(np.dot(weights, q_function((2 * n - 1) * c.d * math.sqrt(2.0 * snr.rho))))


def pber(p: Pattern, demod: str, snr: Snr, c: Constellation | None = None, method: str = "auto") -> float:
    """PBER of one pattern.

    BD uses closed-form thresholds where available (``method="auto"``) and
    the L-value scan otherwise; ABD uses midpoint thresholds.
    """
    c = c or make_constellation(p.order)
    demod = demod.lower()
    if demod == ABD:
        return pber_closed_form(p, abd_thresholds(p, c), snr, c)
    if demod != BD:
        raise ValueError(f"unknown demodulator {demod!r}")
    if method == "auto":
        method = "closed" if closed_form_available(p) else "scan"
    if method == "scan":
        return pber_bd_scan(p, snr, c)
    return pber_closed_form(p, bd_thresholds(p, snr, c, method=method), snr, c)


def pber_curve(p: Pattern, demod: str, snrs_db, c: Constellation | None = None, method: str = "auto") -> list[float]:
    c = c or make_constellation(p.order)
    if demod.lower() == BD and method == "tracked":
        sets = track_bd_thresholds(p, c, snrs_db)
        return [pber_closed_form(p, ts, ts.snr, c) for ts in sets]
    return [pber(p, demod, snr_from_db(db, c), c, method=method) for db in snrs_db]


def ber_labeling(L: Labeling, demod: str, snr: Snr, c: Constellation | None = None, method: str = "auto") -> float:
    """Average BER over the labeling's bit positions.

    For ABD this is the alpha-weighted Q sum; :func:`ber_labeling_abd_by_patterns`
    gives the same value through the per-pattern route.
    """
    c = c or make_constellation(L.order)
    if demod.lower() == ABD:
        alpha = np.asarray(L.abd_weights, dtype=float)
        return _weighted_q_sum(alpha, snr, c) / (L.bits_per_symbol * L.order)
    return float(np.mean([pber(p, BD, snr, c, method=method) for p in L.patterns]))


def ber_labeling_abd_by_patterns(L: Labeling, snr: Snr, c: Constellation | None = None) -> float:
    c = c or make_constellation(L.order)
    return float(np.mean([pber(p, ABD, snr, c) for p in L.patterns]))
