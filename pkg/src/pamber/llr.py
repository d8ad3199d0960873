"""Exact and max-log L-values for one bit position of a PAM labeling."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

from .constellation import Constellation, Snr
from .patterns import Pattern


def subsets(p: Pattern, c: Constellation) -> tuple[np.ndarray, np.ndarray]:
    """Points labelled 0 and 1 by the pattern."""
    bits = np.asarray(p.bits, dtype=bool)
    return c.points[~bits], c.points[bits]


def _as_column(y):
    y = np.asarray(y, dtype=float)
    return y, y[..., None]


def llr_exact(y, subset0, subset1, snr: Snr):
    """``log sum_{x in X1} exp(-rho (y-x)^2) - log sum_{x in X0} exp(-rho (y-x)^2)``.

    Evaluated with max-shifted log-sum-exp, so it stays finite at any SNR.
    """
    y, col = _as_column(y)
    x0 = np.asarray(subset0, dtype=float)
    x1 = np.asarray(subset1, dtype=float)
    l1 = logsumexp(-snr.rho * (col - x1) ** 2, axis=-1)
    l0 = logsumexp(-snr.rho * (col - x0) ** 2, axis=-1)
    out = l1 - l0
    return float(out) if out.ndim == 0 else out


def llr_exact_derivative(y, subset0, subset1, snr: Snr):
    """``d l / d y = 2 rho (E1[x] - E0[x])`` with posterior-weighted subset means."""
    y, col = _as_column(y)
    means = []
    for xs in (np.asarray(subset0, dtype=float), np.asarray(subset1, dtype=float)):
        e = -snr.rho * (col - xs) ** 2
        w = np.exp(e - e.max(axis=-1, keepdims=True))
        means.append((w * xs).sum(axis=-1) / w.sum(axis=-1))
    out = 2.0 * snr.rho * (means[1] - means[0])
    return float(out) if out.ndim == 0 else out


def llr_maxlog(y, subset0, subset1, snr: Snr):
    """``rho [min_{x in X0} (y-x)^2 - min_{x in X1} (y-x)^2]``."""
    y, col = _as_column(y)
    x0 = np.asarray(subset0, dtype=float)
    x1 = np.asarray(subset1, dtype=float)
    out = snr.rho * (((col - x0) ** 2).min(axis=-1) - ((col - x1) ** 2).min(axis=-1))
    return float(out) if out.ndim == 0 else out


def decide(llr):
    """Hard decision: 1 where the L-value is non-negative."""
    return (np.asarray(llr) >= 0).astype(np.int8)


class ScalarLlr:
    """Fast scalar evaluation of the exact L-value and its derivative.

    Root finders call these thousands of times per sweep, where numpy's
    per-call overhead dominates.
    """

    def __init__(self, p: Pattern, c: Constellation, snr: Snr):
        x0, x1 = subsets(p, c)
        self.x0 = [float(v) for v in x0]
        self.x1 = [float(v) for v in x1]
        self.rho = snr.rho

    def _lse(self, y, xs):
        e = [-self.rho * (y - x) ** 2 for x in xs]
        m = max(e)
        return m + math.log(math.fsum(math.exp(v - m) for v in e))

    def __call__(self, y: float) -> float:
        return self._lse(y, self.x1) - self._lse(y, self.x0)

    def _mean(self, y, xs):
        e = [-self.rho * (y - x) ** 2 for x in xs]
        m = max(e)
        w = [math.exp(v - m) for v in e]
        return math.fsum(wi * x for wi, x in zip(w, xs)) / math.fsum(w)

    def derivative(self, y: float) -> float:
        return 2.0 * self.rho * (self._mean(y, self.x1) - self._mean(y, self.x0))
