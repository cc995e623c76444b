"""Seeded Monte-Carlo estimates used as an independent check on the quadrature.

Samples are drawn by inverse transform through ``Distribution.quantile`` and
never touch the integration code.  Trials are cut into fixed-size blocks;
block ``i`` draws from the PCG64 stream spawned as child ``i`` of
``SeedSequence(seed)``.  Blocks are reduced in index order, so an estimate
depends only on ``(seed, trials, query)``, never on how many workers ran.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution
from .errors import DomainError, NonexistentMoment
from .order_stats import _check_int, _check_kn, moment_existence

__all__ = ["SimConfig", "Estimate", "sim_order_stat", "sim_reserve_revenue", "BLOCK_TRIALS"]

BLOCK_TRIALS = 1 << 16
_MAX_CELLS = 1 << 22  # cap on samples held per block (trials x n)


@dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int = 0
    workers: int | None = None

    def __post_init__(self):
        if _check_int(self.trials, "trials") < 1:
            raise DomainError("trials must be >= 1")
        if not 0 <= _check_int(self.seed, "seed") < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    trials: int


def _open_uniforms(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniforms on the open interval (0, 1): 53-bit grid shifted by half a step."""
    bits = rng.integers(0, 1 << 53, size=shape, dtype=np.int64)
    return (bits + 0.5) * 2.0**-53


def _block_sizes(trials: int, n: int) -> list[int]:
    size = max(1, min(BLOCK_TRIALS, _MAX_CELLS // max(n, 1)))
    full, rest = divmod(trials, size)
    return [size] * full + ([rest] if rest else [])


def _run(cfg: SimConfig, n: int, draw) -> Estimate:
    """Run ``draw(rng, m) -> m per-trial values`` over all blocks and merge."""
    sizes = _block_sizes(cfg.trials, n)
    children = np.random.SeedSequence(cfg.seed).spawn(len(sizes))

    def block(i: int):
        rng = np.random.Generator(np.random.PCG64(children[i]))
        vals = draw(rng, sizes[i])
        mean = float(vals.mean())
        m2 = float(((vals - mean) ** 2).sum())
        return sizes[i], mean, m2

    workers = cfg.workers or min(len(sizes), os.cpu_count() or 1)
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, range(len(sizes))))
    else:
        parts = [block(i) for i in range(len(sizes))]

    # Chan et al. pairwise merge, applied in block order.
    count, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        total = count + nb
        delta = mb - mean
        mean += delta * nb / total
        m2 += m2b + delta * delta * count * nb / total
        count = total
    se = math.sqrt(m2 / (count - 1)) / math.sqrt(count) if count > 1 else math.nan
    return Estimate(mean, se, count)


def sim_order_stat(dist: Distribution, k: int, n: int, cfg: SimConfig) -> Estimate:
    """Average of the k-th smallest of n inverse-transform draws."""
    k, n = _check_kn(k, n)
    me = moment_existence(dist, k, n)
    if not me.exists:
        raise NonexistentMoment(f"refusing to average a divergent mu_{{{k}:{n}}}: {me.reason}")

    def draw(rng, m):
        x = dist.quantile(_open_uniforms(rng, (m, n)))
        return np.partition(x, k - 1, axis=1)[:, k - 1]

    return _run(cfg, n, draw)


def sim_reserve_revenue(dist: Distribution, r: float, n: int, cfg: SimConfig) -> Estimate:
    """Average revenue of a second-price auction with reserve r.

    Per trial: the second-highest value if it clears r, else r if the highest
    clears r, else 0.
    """
    n = _check_int(n, "n")
    if n < 2:
        raise DomainError("need n >= 2 bidders")
    if dist.support[0] < 0.0:
        raise DomainError("reserve revenue needs nonnegative values")

    def draw(rng, m):
        x = dist.quantile(_open_uniforms(rng, (m, n)))
        top = np.partition(x, (n - 2, n - 1), axis=1)
        second, first = top[:, n - 2], top[:, n - 1]
        return np.where(second >= r, second, np.where(first >= r, r, 0.0))

    return _run(cfg, n, draw)
