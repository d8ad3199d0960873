"""Monte-Carlo estimation of PBER/BER over the AWGN channel.

Trials are split into fixed blocks of ``BLOCK_SIZE``; block ``b`` draws from a
Philox generator keyed by ``SeedSequence(seed, spawn_key=(b,))``. Shards only
decide which blocks a worker processes, so a result depends on
``(seed, trials, subject, snr, demod)`` and never on the shard count.

Per trial a symbol index is drawn with ``Generator.integers`` and a noise
sample with ``Generator.standard_normal`` (ziggurat), scaled to variance
``1 / (2 rho)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constellation import Constellation, Snr
from .exceptions import PamError
from .labelings import Labeling
from .llr import decide, llr_exact, llr_maxlog, subsets
from .patterns import Pattern

# Re-exported: the simulator is where demodulator L-values are consumed.
__all__ = [
    "BLOCK_SIZE",
    "SimConfig",
    "SimResult",
    "llr_exact",
    "llr_maxlog",
    "run_ber_sim",
    "run_pber_sim",
]

BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    trials: int
    snr: Snr
    demod: str = "bd"
    seed: int = 0
    shards: int = 1

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise PamError(f"trials must be a positive integer, got {self.trials}")
        if self.shards < 1:
            raise PamError(f"shards must be >= 1, got {self.shards}")
        if self.demod.lower() not in ("bd", "abd"):
            raise PamError(f"unknown demodulator {self.demod!r}")
        if not 0 <= self.seed < 2**64:
            raise PamError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class SimResult:
    errors: int
    trials: int
    bits_per_trial: int = 1

    @property
    def decisions(self) -> int:
        return self.trials * self.bits_per_trial

    @property
    def estimate(self) -> float:
        return self.errors / self.decisions

    @property
    def ci95_halfwidth(self) -> float:
        p = self.estimate
        return 1.96 * math.sqrt(p * (1.0 - p) / self.decisions)

    def z_score(self, analytic: float) -> float:
        """``|estimate - analytic|`` in binomial standard deviations of ``analytic``."""
        sigma = math.sqrt(analytic * (1.0 - analytic) / self.decisions)
        if sigma == 0:
            return 0.0 if self.errors == 0 else math.inf
        return abs(self.estimate - analytic) / sigma


def block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def _block_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _draw(cfg: SimConfig, c: Constellation, block: int, n: int):
    rng = block_rng(cfg.seed, block)
    idx = rng.integers(0, c.order, size=n)
    y = c.points[idx] + cfg.snr.noise_std * rng.standard_normal(n)
    return idx, y


def _decide(y, p: Pattern, c: Constellation, cfg: SimConfig):
    x0, x1 = subsets(p, c)
    llr = llr_exact if cfg.demod.lower() == "bd" else llr_maxlog
    return decide(llr(y, x0, x1, cfg.snr))


def _run(cfg: SimConfig, count_block) -> int:
    sizes = _block_sizes(cfg.trials)
    shards = min(cfg.shards, len(sizes))
    chunks = [list(range(s, len(sizes), shards)) for s in range(shards)]

    def work(blocks):
        return sum(count_block(b, sizes[b]) for b in blocks)

    if shards == 1:
        return work(chunks[0])
    with ThreadPoolExecutor(max_workers=shards) as pool:
        return sum(pool.map(work, chunks))


def run_pber_sim(cfg: SimConfig, p: Pattern, c: Constellation) -> SimResult:
    bits = np.asarray(p.bits, dtype=np.int8)

    def count_block(block, n):
        idx, y = _draw(cfg, c, block, n)
        return int(np.count_nonzero(_decide(y, p, c, cfg) != bits[idx]))

    return SimResult(errors=_run(cfg, count_block), trials=int(cfg.trials))


def run_ber_sim(cfg: SimConfig, L: Labeling, c: Constellation) -> SimResult:
    """Simulate the labeling: a uniform index into the row table is a uniform m-bit word."""
    patterns = L.patterns
    matrix = np.asarray(L.matrix, dtype=np.int8)

    def count_block(block, n):
        idx, y = _draw(cfg, c, block, n)
        errs = 0
        for j, p in enumerate(patterns):
            errs += int(np.count_nonzero(_decide(y, p, c, cfg) != matrix[idx, j]))
        return errs

    return SimResult(errors=_run(cfg, count_block), trials=int(cfg.trials), bits_per_trial=L.bits_per_symbol)
