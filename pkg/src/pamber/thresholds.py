"""Decision thresholds of the bit-wise demodulators.

For a pattern ``p`` the threshold ``beta_k`` sits between the decision
regions around ``s_k`` and ``s_{k+1}`` whenever ``p_k != p_{k+1}``. The max-log
demodulator (ABD) uses fixed midpoints. The optimal demodulator (BD) uses the
zeros of the exact L-value, which depend on the SNR and can merge in pairs at
low SNR. A merged threshold is kept as a *virtual* entry whose value equals a
partner's, so the Q-function expansion of the PBER still applies.

Three routes to the BD thresholds are provided:

* :func:`bd_thresholds_numeric` -- sign scan of the exact L-value, any order
  and any pattern. Virtual entries come from tracking the thresholds
  downwards from a high reference SNR.
* :func:`bd_thresholds_4pam` -- closed form for every 4-PAM pattern.
* :func:`bd_thresholds_8pam` -- closed form (Cardano) for the RE/ARE
  patterns of 8-PAM, evaluated in extended precision.

:func:`bd_polynomial` and :func:`polynomial_boundaries` give the
companion-matrix cross-check of the scan.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

from .constellation import Constellation, Snr, make_constellation, snr_from_db
from .exceptions import AsymmetricPatternError, NumericalFailure, WrongOrderError
from .llr import ScalarLlr, llr_exact, llr_exact_derivative, subsets
from .patterns import Pattern, SymType, class_of, classify_symmetry

REFERENCE_DB = 30.0
SWEEP_STEP_DB = 0.1
SCAN_HALF_WIDTH = 10.0  # in noise standard deviations beyond the outer points
BISECTION_XTOL = 1e-13
CROSS_CHECK_TOL = 1e-9
RESIDUAL_TOL = 1e-9


class Method(str, enum.Enum):
    CLOSED_FORM_4 = "closed-form-4"
    CLOSED_FORM_8 = "closed-form-8"
    POLY_NUMERIC = "poly"
    SIGN_SCAN = "scan"
    ABD_MIDPOINT = "abd-midpoint"


@dataclass(frozen=True)
class ThresholdEntry:
    value: float
    virtual: bool = False
    partner: int | None = None


@dataclass(frozen=True)
class ClosedFormIntermediates:
    """Quantities behind a closed-form threshold set.

    ``t`` and ``z`` are rounded to Python complex numbers and may be ``inf``
    at very high SNR, where they exceed the double range.
    """

    A: float
    T: float | None = None
    C: float | None = None
    D: float | None = None
    B: complex | None = None
    t: tuple[complex, ...] = ()
    z: tuple[complex, ...] = ()
    t_residuals: tuple[float, ...] = ()
    z_residuals: tuple[float, ...] = ()


@dataclass(frozen=True)
class ThresholdSet:
    pattern: Pattern
    snr: Snr | None
    entries: dict[int, ThresholdEntry]
    method: Method
    intermediates: ClosedFormIntermediates | None = field(default=None, compare=False)

    @property
    def values(self) -> dict[int, float]:
        return {k: e.value for k, e in self.entries.items()}

    @property
    def live(self) -> dict[int, float]:
        """Non-virtual thresholds, i.e. the actual decision boundaries."""
        return {k: e.value for k, e in self.entries.items() if not e.virtual}

    @property
    def virtual_indices(self) -> tuple[int, ...]:
        return tuple(k for k, e in self.entries.items() if e.virtual)

    def boundaries(self) -> np.ndarray:
        return np.array(sorted(self.live.values()))


# ---------------------------------------------------------------------------
# ABD


def abd_thresholds(p: Pattern, c: Constellation) -> ThresholdSet:
    entries = {k: ThresholdEntry(c.midpoint(k)) for k in p.threshold_indices}
    return ThresholdSet(pattern=p, snr=None, entries=entries, method=Method.ABD_MIDPOINT)


# ---------------------------------------------------------------------------
# Polynomial form


def _a_exponents(order: int) -> list[int]:
    h = order // 2
    return [(h - i) * (h + 1 - i) // 2 for i in range(1, order + 1)]


def bd_polynomial(p: Pattern, snr: Snr) -> np.ndarray:
    """Coefficients ``c_0..c_{M-1}`` (ascending powers of ``z = exp(4 rho d y)``).

    ``c_{i-1} = (2 p_i - 1) A**((M/2 - i)(M/2 + 1 - i)/2)``; the positive real
    roots map to thresholds through ``y = log(z) / (4 rho d)``.
    """
    exps = _a_exponents(p.order)
    return np.array([b * math.exp(e * snr.log_A) for b, e in zip(p.bipolar, exps)])


def polynomial_boundaries(p: Pattern, snr: Snr) -> np.ndarray:
    """Zero crossings of the L-value from the companion-matrix roots."""
    coef = bd_polynomial(p, snr)
    if abs(coef[0]) < 1e-250:
        raise NumericalFailure(f"polynomial coefficients underflow at {snr.db:.3f} dB")
    roots = np.roots(coef[::-1])
    roots = roots[(np.abs(roots.imag) <= 1e-7 * np.abs(roots)) & (roots.real > 0)].real
    desc = coef[::-1]
    deriv = np.polyder(desc)
    polished = []
    for z in roots:
        for _ in range(4):
            dp = np.polyval(deriv, z)
            if dp == 0:
                break
            z = z - np.polyval(desc, z) / dp
        if z > 0:
            polished.append(z)
    scale = 4.0 * snr.rho * snr.half_spacing
    return np.sort(np.log(np.array(polished)) / scale)


def polynomial_residual(p: Pattern, snr: Snr, y: float) -> float:
    """Backward error ``|h(z)| / sum |c_i z^i|`` at ``z = exp(4 rho d y)``."""
    log_z = 4.0 * snr.rho * snr.half_spacing * y
    i = np.arange(p.order)
    # Work with log-magnitudes so neither A**e nor z**i under/overflows.
    mags = np.array(_a_exponents(p.order)) * snr.log_A + i * log_z
    terms = np.asarray(p.bipolar) * np.exp(mags - mags.max())
    return float(abs(terms.sum()) / np.abs(terms).sum())


# ---------------------------------------------------------------------------
# Sign scan


def _scan_interval(p: Pattern, snr: Snr, c: Constellation) -> tuple[float, float]:
    sigma = snr.noise_std
    lo = c.points[0] - SCAN_HALF_WIDTH * sigma
    hi = c.points[-1] + SCAN_HALF_WIDTH * sigma
    x0, x1 = subsets(p, c)
    # The outer decisions must match p_1 and p_M; widen until they do.
    for _ in range(60):
        ok_lo = (llr_exact(lo, x0, x1, snr) >= 0) == bool(p.bits[0])
        ok_hi = (llr_exact(hi, x0, x1, snr) >= 0) == bool(p.bits[-1])
        if ok_lo and ok_hi:
            return lo, hi
        width = hi - lo
        if not ok_lo:
            lo -= width
        if not ok_hi:
            hi += width
    raise NumericalFailure("could not bracket the outer decision regions")


def scan_boundaries(p: Pattern, snr: Snr, c: Constellation) -> np.ndarray:
    """All sign changes of the exact L-value, ascending.

    A uniform grid of ``64 (M-1)`` cells is augmented with the critical
    points of the L-value so that every monotone piece is bracketed; a pair
    of close zeros therefore cannot hide inside one cell. Tangential zeros
    are not crossings and are dropped.
    """
    lo, hi = _scan_interval(p, snr, c)
    x0, x1 = subsets(p, c)
    grid = np.linspace(lo, hi, 64 * (p.order - 1) + 1)
    f = ScalarLlr(p, c, snr)

    dl = llr_exact_derivative(grid, x0, x1, snr)
    crit = []
    for i in np.flatnonzero(np.sign(dl[:-1]) * np.sign(dl[1:]) < 0):
        crit.append(brentq(f.derivative, grid[i], grid[i + 1], xtol=BISECTION_XTOL))
    pts = np.sort(np.concatenate([grid, crit])) if crit else grid

    vals = llr_exact(pts, x0, x1, snr)
    dec = vals >= 0
    out = []
    for i in np.flatnonzero(dec[:-1] != dec[1:]):
        a, b = pts[i], pts[i + 1]
        if vals[i + 1] == 0.0:
            root = b
        elif vals[i] == 0.0:
            root = a
        else:
            root = brentq(f, a, b, xtol=BISECTION_XTOL)
        out.append(root)
    out = np.array(out)
    if len(out) > 1:
        # Drop zero-width regions from tangential zeros.
        keep = np.ones(len(out), dtype=bool)
        for i in range(len(out) - 1):
            if keep[i] and out[i + 1] == out[i]:
                keep[i] = keep[i + 1] = False
        out = out[keep]
    return out


def _cross_check(p: Pattern, snr: Snr, c: Constellation, boundaries: np.ndarray) -> None:
    """Compare scan zeros with the polynomial roots where the latter are reliable."""
    try:
        poly = polynomial_boundaries(p, snr)
    except NumericalFailure:
        poly = None
    if poly is not None and len(poly) != len(boundaries):
        # Companion roots lose z ~ A or z ~ 1/A at high SNR; the residual check still applies.
        poly = None
    for i, b in enumerate(boundaries):
        if polynomial_residual(p, snr, b) > RESIDUAL_TOL:
            raise NumericalFailure(f"scan boundary {b} is not a root of the threshold polynomial")
        if poly is None or len(poly) == 0:
            continue
        gaps = np.diff(boundaries)
        sep = min(gaps[i - 1] if i > 0 else np.inf, gaps[i] if i < len(gaps) else np.inf)
        if sep < 1e-3 * c.d:
            continue  # near a merge the companion roots are ill-conditioned
        nearest = poly[np.argmin(np.abs(poly - b))]
        if abs(nearest - b) > CROSS_CHECK_TOL:
            raise NumericalFailure(
                f"scan boundary {b!r} and polynomial root {nearest!r} disagree "
                f"at {snr.db:.3f} dB for {p!r}"
            )


# ---------------------------------------------------------------------------
# Tracking with virtual-threshold bookkeeping


def _assign(boundaries, slots, values, live, penalty):
    """Order-preserving assignment of boundaries to threshold slots (least squares)."""
    n, m = len(boundaries), len(slots)
    inf = math.inf
    cost = [[inf] * (m + 1) for _ in range(n + 1)]
    take = [[False] * (m + 1) for _ in range(n + 1)]
    for j in range(m + 1):
        cost[0][j] = 0.0
    for i in range(1, n + 1):
        for j in range(i, m + 1):
            k = slots[j - 1]
            skip = cost[i][j - 1]
            use = cost[i - 1][j - 1] + (boundaries[i - 1] - values[k]) ** 2
            if not live[k]:
                use += penalty
            if use <= skip:
                cost[i][j], take[i][j] = use, True
            else:
                cost[i][j] = skip
    assigned = {}
    i, j = n, m
    while i > 0:
        if take[i][j]:
            assigned[slots[j - 1]] = boundaries[i - 1]
            i -= 1
        j -= 1
    return assigned


class _Tracker:
    def __init__(self, p: Pattern, boundaries: np.ndarray, span: float):
        self.p = p
        self.slots = list(p.threshold_indices)
        if len(boundaries) != len(self.slots):
            raise NumericalFailure(
                f"{p!r}: expected {len(self.slots)} thresholds at the reference SNR, "
                f"found {len(boundaries)}"
            )
        self.values = dict(zip(self.slots, map(float, boundaries)))
        self.live = {k: True for k in self.slots}
        self.partner: dict[int, int | None] = {k: None for k in self.slots}
        self.follows: dict[int, bool] = {k: False for k in self.slots}
        self.penalty = 1e3 * span**2

    def _resolve(self, k, seen=()):
        if self.live[k] or not self.follows[k]:
            return self.values[k]
        if k in seen:
            return self.values[k]
        return self._resolve(self.partner[k], seen + (k,))

    def update(self, boundaries: np.ndarray) -> None:
        if len(boundaries) > len(self.slots):
            raise NumericalFailure(f"{self.p!r}: more zero crossings than thresholds")
        assigned = _assign(list(map(float, boundaries)), self.slots, self.values, self.live, self.penalty)
        prev_live = [k for k in self.slots if self.live[k]]
        prev_values = dict(self.values)

        for k, v in assigned.items():
            self.values[k] = v
            if not self.live[k]:
                self.live[k] = True
                self.partner[k] = None
                self.follows[k] = False

        vanished = [k for k in prev_live if k not in assigned]
        if vanished:
            self._pair_vanished(prev_live, assigned, prev_values)

        for k in self.slots:
            if not self.live[k] and self.follows[k]:
                self.values[k] = self._resolve(k)

    def _pair_vanished(self, prev_live, assigned, prev_values):
        runs, run = [], []
        for pos, k in enumerate(prev_live):
            if k in assigned:
                if run:
                    runs.append(run)
                    run = []
            else:
                run.append(pos)
        if run:
            runs.append(run)

        for run in runs:
            ks = [prev_live[i] for i in run]
            if len(ks) % 2:
                left = prev_live[run[0] - 1] if run[0] > 0 else None
                right = prev_live[run[-1] + 1] if run[-1] + 1 < len(prev_live) else None
                d_left = abs(self.values[left] - prev_values[ks[0]]) if left is not None else math.inf
                d_right = abs(self.values[right] - prev_values[ks[-1]]) if right is not None else math.inf
                if d_left == math.inf and d_right == math.inf:
                    raise NumericalFailure(f"{self.p!r}: an odd number of thresholds vanished")
                if d_left <= d_right:
                    single, neighbour, ks = ks[0], left, ks[1:]
                else:
                    single, neighbour, ks = ks[-1], right, ks[:-1]
                self.live[single] = False
                self.partner[single] = neighbour
                self.follows[single] = True
            for a, b in zip(ks[::2], ks[1::2]):
                v = 0.5 * (prev_values[a] + prev_values[b])
                for k, other in ((a, b), (b, a)):
                    self.live[k] = False
                    self.partner[k] = other
                    self.follows[k] = False
                    self.values[k] = v

    def snapshot(self, snr: Snr) -> ThresholdSet:
        entries = {}
        for k in self.slots:
            if self.live[k]:
                entries[k] = ThresholdEntry(self.values[k])
            else:
                entries[k] = ThresholdEntry(self._resolve(k), True, self.partner[k])
        return ThresholdSet(pattern=self.p, snr=snr, entries=entries, method=Method.SIGN_SCAN)


def _sweep_points(targets_db, reference_db, step_db):
    hi = max(reference_db, max(targets_db))
    lo = min(targets_db)
    n = max(1, math.ceil((hi - lo) / step_db))
    grid = {round(float(v), 12) for v in np.linspace(hi, lo, n + 1)}
    grid.update(round(float(t), 12) for t in targets_db)
    return sorted(grid, reverse=True)


def track_bd_thresholds(
    p: Pattern,
    c: Constellation,
    snrs_db,
    reference_db: float = REFERENCE_DB,
    step_db: float = SWEEP_STEP_DB,
    cross_check: bool = False,
) -> list[ThresholdSet]:
    """BD thresholds with virtual entries over a set of SNRs (dB).

    The thresholds are followed downwards in SNR from ``reference_db``,
    where all of them exist, in steps of at most ``step_db``. When zero
    crossings disappear between two steps the affected thresholds become
    virtual: a vanishing pair is partnered with itself, while a single
    threshold that collapses onto a surviving one is partnered with it and
    copies its value from then on.

    Returns one :class:`ThresholdSet` per requested SNR, in input order.
    """
    snrs_db = [float(s) for s in snrs_db]
    if not snrs_db:
        return []
    points = _sweep_points(snrs_db, reference_db, step_db)
    start = points[0]
    span = c.points[-1] - c.points[0]

    first = snr_from_db(start, c)
    b = scan_boundaries(p, first, c)
    while len(b) != len(p.threshold_indices) and start < reference_db + 40:
        start += 10.0
        first = snr_from_db(start, c)
        b = scan_boundaries(p, first, c)
    tracker = _Tracker(p, b, span + 20 * first.noise_std)

    wanted = {round(s, 12) for s in snrs_db}
    results = {}
    for db in points:
        snr = snr_from_db(db, c)
        if db != points[0] or start != points[0]:
            b = scan_boundaries(p, snr, c)
            tracker.update(b)
        if db in wanted:
            if cross_check:
                _cross_check(p, snr, c, b)
            results[db] = tracker.snapshot(snr)
    return [results[round(s, 12)] for s in snrs_db]


def bd_thresholds_numeric(p: Pattern, snr: Snr, c: Constellation, cross_check: bool = True) -> ThresholdSet:
    """BD thresholds from the L-value sign scan, with virtual entries resolved."""
    return track_bd_thresholds(p, c, [snr.db], cross_check=cross_check)[0]


# ---------------------------------------------------------------------------
# Closed forms


def bd_thresholds_4pam(p: Pattern, snr: Snr, c: Constellation) -> ThresholdSet:
    if p.order != 4 or c.order != 4:
        raise WrongOrderError("closed-form 4-PAM thresholds need order 4")
    K = p.threshold_indices
    pb = p.bipolar
    s14 = pb[0] * pb[3]
    log_A = snr.log_A
    A = math.exp(log_A)
    scale = 4.0 * snr.rho * c.d
    entries = {}
    if 2 in K:
        entries[2] = ThresholdEntry(0.0)
    arg = (1.0 + s14 * A) ** 2 - 4.0 * A * A
    root = cmath_sqrt(arg)
    zs = [complex(-s14)]
    if A > 0:
        zs += [((1 + s14 * A) + sgn * root) / (2 * A) for sgn in (1, -1)]
    if 1 in K and 3 in K:
        if arg >= 0:
            beta3 = (math.log((1.0 + s14 * A + math.sqrt(arg)) / 2.0) - log_A) / scale
            entries[1] = ThresholdEntry(-beta3)
            entries[3] = ThresholdEntry(beta3)
        else:
            partner = (2, 2) if 2 in K else (3, 1)
            entries[1] = ThresholdEntry(0.0, True, partner[0])
            entries[3] = ThresholdEntry(0.0, True, partner[1])
    entries = dict(sorted(entries.items()))
    inter = ClosedFormIntermediates(A=A, z=tuple(zs))
    return ThresholdSet(pattern=p, snr=snr, entries=entries, method=Method.CLOSED_FORM_4, intermediates=inter)


def cmath_sqrt(x: float) -> complex:
    return complex(math.sqrt(x)) if x >= 0 else complex(0.0, math.sqrt(-x))


# (k, n): beta_k = -beta_{8-k} = f(t_n) for the class representative, k in 5..7.
THRESHOLD_ROOT_MAP_8PAM = {
    1: {},
    2: {6: 2},
    3: {5: 1},
    4: {7: 2},
    5: {6: 2},
    6: {7: 2, 5: 3},
    7: {6: 2, 5: 3},
    8: {7: 2, 6: 3},
    9: {7: 2, 5: 3},
    10: {7: 1, 6: 3, 5: 2},
    11: {7: 2, 6: 3, 5: 1},
}


def _working_dps(log_A: float) -> int:
    return 40 + math.ceil(4.0 * abs(log_A) / math.log(10.0))


def _to_complex(x) -> complex:
    try:
        return complex(x)
    except OverflowError:
        return complex(math.inf, 0.0)


def _cardano_roots(pb, A):
    """Roots ``t_1..t_3`` of the symmetric-pattern cubic and the cubic itself (mpmath)."""
    p1, p2, p3, p4, _, _, _, p8 = (mp.mpf(v) for v in pb)
    s = p1 * p8
    A3, A6 = A**3, A**6
    T = 2 * (p8 * A3 - p2)
    C = 7 * A6 + p2 * p8 * A3 - 3 * p1 * p3 * A + 1
    D = (
        7 * p1 * A**9
        - 12 * p1 * p2 * p8 * A6
        - 18 * p3 * A**4
        + 3 * p1 * (1 + 9 * p4 * p8) * A3
        - 9 * p2 * p3 * p8 * A
        + 2 * p1 * p2 * p8
    )
    cubic = (
        p1 * A6,
        p2 * A3 - s * p1 * A6,
        -2 * p1 * A6 - s * p2 * A3 + p3 * A,
        s * p1 * A6 - p2 * A3 - s * p3 * A + p4,
    )
    B = (mp.sqrt(mp.mpc(D * D - 4 * C**3)) - s * D) ** (mp.mpf(1) / 3)
    if B == 0:
        raise NumericalFailure("degenerate Cardano intermediate B = 0")
    c2, c4 = mp.cbrt(2), mp.cbrt(4)
    j, r3 = mp.mpc(0, 1), mp.sqrt(3)
    den = 6 * p1 * A3
    omega = mp.exp(2j * mp.pi / 3)

    def roots_for(b):
        return (
            (T + 2 * c2 * C / b + c4 * b) / den,
            (T - c2 * (1 + r3 * j) * C / b - (1 - r3 * j) / c2 * b) / den,
            (T - c2 * (1 - r3 * j) * C / b - (1 + r3 * j) / c2 * b) / den,
        )

    def residual(t):
        a, b2, c1, c0 = cubic
        terms = (a * t**3, b2 * t**2, c1 * t, c0)
        return abs(sum(terms)) / sum(abs(x) for x in terms)

    for rot in range(3):
        b = B * omega**rot
        ts = roots_for(b)
        res = [residual(t) for t in ts]
        if max(res) < RESIDUAL_TOL:
            return ts, res, (T, C, D, b)
    raise NumericalFailure("no Cardano branch satisfies the cubic")


def bd_thresholds_8pam(p: Pattern, snr: Snr, c: Constellation) -> ThresholdSet:
    if p.order != 8 or c.order != 8:
        raise WrongOrderError("closed-form 8-PAM thresholds need order 8")
    if classify_symmetry(p) is SymType.ASY:
        raise AsymmetricPatternError(f"{p!r} is asymmetric; use bd_thresholds_numeric")
    cls = class_of(p)
    rep = cls.representative
    root_map = THRESHOLD_ROOT_MAP_8PAM[cls.class_id]
    K = set(p.threshold_indices)
    scale = 4.0 * snr.rho * c.d

    with mp.workdps(_working_dps(snr.log_A)):
        A = mp.exp(mp.mpf(snr.log_A))
        ts, t_res, (T, C, D, B) = _cardano_roots(rep.bipolar, A) if root_map else ((), (), (None,) * 4)
        tol = mp.mpf(10) ** (-(mp.mp.dps // 2))

        def is_real(t):
            return abs(mp.im(t)) <= tol * max(1, abs(t))

        def f(t):
            at = abs(t)
            return float(mp.log(abs((at + mp.sqrt(mp.mpc(at * at - 4))) / 2)) / scale)

        entries: dict[int, ThresholdEntry] = {}
        if 4 in K:
            entries[4] = ThresholdEntry(0.0)
        z_list, z_res = [], []
        done = set()
        for k, n in sorted(root_map.items()):
            if k in done:
                continue
            t = ts[n - 1]
            if is_real(t) and mp.re(t) >= 2:
                v = f(t)
                entries[k] = ThresholdEntry(v)
                entries[8 - k] = ThresholdEntry(-v)
                tr = mp.re(t)
                for z in ((tr + mp.sqrt(tr * tr - 4)) / 2, (tr - mp.sqrt(tr * tr - 4)) / 2):
                    z_list.append(z)
                    z_res.append(_poly_residual_mp(rep.bipolar, A, z))
                done.add(k)
            elif is_real(t):
                # Unit-magnitude z: both thresholds collapse onto 0.
                pk, pm = (4, 4) if 4 in K else (8 - k, k)
                entries[k] = ThresholdEntry(0.0, True, pk)
                entries[8 - k] = ThresholdEntry(-0.0, True, pm)
                done.add(k)
            else:
                mate = None
                for k2, n2 in root_map.items():
                    if k2 != k and k2 not in done and abs(ts[n2 - 1] - mp.conj(t)) <= 1e-6 * abs(t):
                        mate = k2
                if mate is None:
                    raise NumericalFailure(f"complex root t_{n} without a conjugate partner for {p!r}")
                v = f(t)
                entries[k] = ThresholdEntry(v, True, mate)
                entries[mate] = ThresholdEntry(v, True, k)
                entries[8 - k] = ThresholdEntry(-v, True, 8 - mate)
                entries[8 - mate] = ThresholdEntry(-v, True, 8 - k)
                done.update({k, mate})

        inter = ClosedFormIntermediates(
            A=float(A),
            T=None if T is None else float(T),
            C=None if C is None else float(C),
            D=None if D is None else float(D),
            B=None if B is None else _to_complex(B),
            t=tuple(_to_complex(t) for t in ts),
            z=tuple(_to_complex(z) for z in z_list),
            t_residuals=tuple(float(r) for r in t_res),
            z_residuals=tuple(float(r) for r in z_res),
        )
    entries = dict(sorted(entries.items()))
    return ThresholdSet(pattern=p, snr=snr, entries=entries, method=Method.CLOSED_FORM_8, intermediates=inter)


def _poly_residual_mp(pb, A, z):
    exps = _a_exponents(len(pb))
    terms = [b * A**e * z**i for i, (b, e) in enumerate(zip(pb, exps))]
    return abs(mp.fsum(terms)) / mp.fsum(abs(x) for x in terms)


def closed_form_available(p: Pattern) -> bool:
    if p.order == 4:
        return True
    return p.order == 8 and classify_symmetry(p) is not SymType.ASY


def bd_thresholds(p: Pattern, snr: Snr, c: Constellation | None = None, method: str = "auto") -> ThresholdSet:
    """BD thresholds by the requested method (``auto``, ``closed`` or ``scan``)."""
    c = c or make_constellation(p.order)
    if method == "auto":
        method = "closed" if closed_form_available(p) else "scan"
    if method == "closed":
        if p.order == 4:
            return bd_thresholds_4pam(p, snr, c)
        if p.order == 8:
            return bd_thresholds_8pam(p, snr, c)
        raise WrongOrderError(f"no closed-form thresholds for {p.order}-PAM")
    if method == "scan":
        return bd_thresholds_numeric(p, snr, c)
    raise ValueError(f"unknown threshold method {method!r}")


def merge_snr_db(
    p: Pattern,
    lo_db: float,
    hi_db: float,
    c: Constellation | None = None,
    method: str = "closed",
    k: int | None = None,
    tol_db: float = 1e-6,
) -> float:
    """Bisect for the SNR in ``[lo_db, hi_db]`` where thresholds merge.

    With ``method="closed"`` the virtual flag of threshold ``k`` (or the
    number of virtual entries if ``k`` is None) is bisected. With
    ``method="scan"`` the number of L-value zero crossings is bisected,
    which needs no tracking. The two ends must differ in that quantity.
    """
    c = c or make_constellation(p.order)

    def state(db):
        snr = snr_from_db(db, c)
        if method == "scan":
            return len(scan_boundaries(p, snr, c))
        ts = bd_thresholds(p, snr, c, method="closed")
        if k is not None:
            return ts.entries[k].virtual
        return len(ts.virtual_indices)

    s_lo, s_hi = state(lo_db), state(hi_db)
    if s_lo == s_hi:
        raise ValueError(f"no merge between {lo_db} and {hi_db} dB")
    while hi_db - lo_db > tol_db:
        mid = 0.5 * (lo_db + hi_db)
        if state(mid) == s_hi:
            hi_db = mid
        else:
            lo_db = mid
    return 0.5 * (lo_db + hi_db)
