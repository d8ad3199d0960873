"""scikit-learn style wrappers around the modulator and bitwise demodulators.

These are thin adapters: the numerics live in :mod:`pamber.llr` and
:mod:`pamber.labelings`. They exist so that PAM transmission chains can be
composed with sklearn tooling (``get_params``, ``clone``, pipelines).
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .constellation import make_constellation, snr_from_db
from .labelings import Labeling, builtin_labeling, labeling_from_columns
from .llr import llr_exact, llr_maxlog, subsets


def _resolve_labeling(labeling, order: int) -> Labeling:
    if isinstance(labeling, Labeling):
        if labeling.order != order:
            raise ValueError(f"labeling is for {labeling.order}-PAM, not {order}-PAM")
        return labeling
    if isinstance(labeling, str):
        return builtin_labeling(labeling, order)
    return labeling_from_columns(labeling, order)


def _received(X) -> np.ndarray:
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected one real sample per row, got {X.shape[1]} columns")
        X = X[:, 0]
    return X


class PamModulator(TransformerMixin, BaseEstimator):
    """Map m-bit labels to M-PAM amplitudes and back (nearest point).

    Parameters
    ----------
    order : int
        Constellation size M.
    labeling : str or sequence of int or Labeling
        Builtin name, column pattern indices, or a labeling object.
    """

    def __init__(self, order=8, labeling="BRGC"):
        self.order = order
        self.labeling = labeling

    def fit(self, X=None, y=None):
        self.constellation_ = make_constellation(self.order)
        self.labeling_ = _resolve_labeling(self.labeling, self.order)
        m = self.labeling_.bits_per_symbol
        rows = self.labeling_.matrix.astype(np.int64) @ (1 << np.arange(m - 1, -1, -1))
        self.row_of_word_ = np.argsort(rows)
        self.n_features_in_ = m
        return self

    def transform(self, X):
        """Bits of shape ``(n, m)`` to amplitudes of shape ``(n, 1)``."""
        check_is_fitted(self)
        B = check_array(X, dtype=np.int64)
        m = self.labeling_.bits_per_symbol
        if B.shape[1] != m or np.any((B != 0) & (B != 1)):
            raise ValueError(f"expected binary rows of length {m}")
        words = B @ (1 << np.arange(m - 1, -1, -1))
        return self.constellation_.points[self.row_of_word_[words]][:, None]

    def inverse_transform(self, X):
        """Nearest-point hard decisions, returned as label bits."""
        check_is_fitted(self)
        y = _received(X)
        idx = np.abs(y[:, None] - self.constellation_.points[None, :]).argmin(axis=1)
        return np.asarray(self.labeling_.matrix)[idx]


class BitwiseDemodulator(ClassifierMixin, BaseEstimator):
    """Bitwise hard/soft demodulator for M-PAM over AWGN.

    Nothing is learned; :meth:`fit` only fixes the constellation, labeling and
    SNR. Outputs are multi-output: one column per bit position.

    Parameters
    ----------
    order : int
        Constellation size M.
    labeling : str or sequence of int or Labeling
        Builtin name, column pattern indices, or a labeling object.
    snr_db : float
        Symbol SNR in dB.
    demod : {"bd", "abd"}
        Exact L-values or the max-log approximation.
    """

    def __init__(self, order=8, labeling="BRGC", snr_db=10.0, demod="bd"):
        self.order = order
        self.labeling = labeling
        self.snr_db = snr_db
        self.demod = demod

    def fit(self, X=None, y=None):
        if self.demod not in ("bd", "abd"):
            raise ValueError(f"demod must be 'bd' or 'abd', got {self.demod!r}")
        self.constellation_ = make_constellation(self.order)
        self.labeling_ = _resolve_labeling(self.labeling, self.order)
        self.snr_ = snr_from_db(float(self.snr_db), self.constellation_)
        self.subsets_ = [subsets(p, self.constellation_) for p in self.labeling_.patterns]
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = 1
        if y is not None:
            y = check_array(y, dtype=np.int64)
            if y.shape[1] != self.labeling_.bits_per_symbol:
                raise ValueError("y must have one column per bit position")
        return self

    def decision_function(self, X):
        """L-values, shape ``(n, m)``; positive favours bit 1."""
        check_is_fitted(self)
        y = _received(X)
        llr = llr_exact if self.demod == "bd" else llr_maxlog
        return np.column_stack([np.atleast_1d(llr(y, x0, x1, self.snr_)) for x0, x1 in self.subsets_])

    def predict(self, X):
        return (self.decision_function(X) >= 0).astype(np.int8)

    def predict_proba(self, X):
        """``Pr{B_j = 1 | y}`` per bit position (exact only for ``demod="bd"``)."""
        return expit(self.decision_function(X))

    def score(self, X, y, sample_weight=None):
        """Bitwise accuracy, i.e. ``1 - BER`` on the given data."""
        y = check_array(y, dtype=np.int64)
        hits = (self.predict(X) == y).mean(axis=1)
        return float(np.average(hits, weights=sample_weight))
