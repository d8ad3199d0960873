"""PAM constellation, SNR bookkeeping and the Gaussian tail function."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .exceptions import NotPowerOfTwoError, OrderTooSmallError, OutOfRangeError

MAX_ORDER = 2**20

# Q(40) ~ 1e-350 is below the smallest subnormal double.
_Q_CUTOFF = 40.0


@dataclass(frozen=True)
class Constellation:
    """Equally spaced, unit-energy M-PAM constellation.

    Attributes
    ----------
    order : int
        Number of points ``M = 2**m``.
    half_spacing : float
        ``d = sqrt(3 / (M**2 - 1))``; adjacent points are ``2 d`` apart.
    points : numpy.ndarray
        Ascending points ``s_i = -d (M - 2 i + 1)``, ``i = 1..M``.
    """

    order: int
    half_spacing: float
    points: np.ndarray

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    @property
    def d(self) -> float:
        return self.half_spacing

    @property
    def energy(self) -> float:
        return float(np.mean(self.points**2))

    def midpoint(self, k: int) -> float:
        """Midpoint between ``s_k`` and ``s_{k+1}`` (1-based ``k``)."""
        return 0.5 * (self.points[k - 1] + self.points[k])


def check_order(order, minimum: int = 4) -> int:
    """Validate a constellation order and return it as ``int``."""
    if isinstance(order, bool) or int(order) != order:
        raise NotPowerOfTwoError(f"order must be an integer, got {order!r}")
    order = int(order)
    if order < 1 or order & (order - 1):
        raise NotPowerOfTwoError(f"order must be a power of two, got {order}")
    if order < minimum:
        raise OrderTooSmallError(f"order must be at least {minimum}, got {order}")
    if order > MAX_ORDER:
        raise OutOfRangeError(f"order {order} exceeds the {MAX_ORDER} guardrail")
    return order


def make_constellation(order: int) -> Constellation:
    order = check_order(order)
    d = math.sqrt(3.0 / (order * order - 1))
    # Build the upper half and mirror it so that s_i == -s_{M+1-i} exactly.
    upper = d * (2.0 * np.arange(1, order // 2 + 1) - 1.0)
    points = np.concatenate([-upper[::-1], upper])
    points.setflags(write=False)
    return Constellation(order=order, half_spacing=d, points=points)


@dataclass(frozen=True)
class Snr:
    """Linear SNR ``rho = Es/N0`` bound to a constellation's half spacing."""

    rho: float
    half_spacing: float

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise OutOfRangeError(f"SNR must be positive and finite, got {self.rho}")

    @property
    def db(self) -> float:
        return 10.0 * math.log10(self.rho)

    @property
    def log_A(self) -> float:
        return -8.0 * self.rho * self.half_spacing**2

    @property
    def A(self) -> float:
        """``exp(-8 rho d**2)``; may underflow to 0 at very high SNR, see :attr:`log_A`."""
        return math.exp(self.log_A)

    @property
    def noise_std(self) -> float:
        """Standard deviation of the real noise sample, ``sqrt(N0 / 2)``."""
        return math.sqrt(0.5 / self.rho)


def snr_from_db(db: float, c: Constellation) -> Snr:
    if not math.isfinite(db):
        raise OutOfRangeError(f"SNR in dB must be finite, got {db}")
    return Snr(rho=10.0 ** (db / 10.0), half_spacing=c.half_spacing)


def snr_from_linear(rho: float, c: Constellation) -> Snr:
    return Snr(rho=float(rho), half_spacing=c.half_spacing)


def q_function(x):
    """Gaussian tail probability ``Q(x) = erfc(x / sqrt(2)) / 2``.

    Accepts scalars or arrays. Arguments above 40 return exactly 0 and
    below -40 exactly 1.
    """
    x = np.asarray(x, dtype=float)
    out = 0.5 * erfc(x / math.sqrt(2.0))
    out = np.where(x > _Q_CUTOFF, 0.0, out)
    out = np.where(x < -_Q_CUTOFF, 1.0, out)
    if out.ndim == 0:
        return float(out)
    return out
