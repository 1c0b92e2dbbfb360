"""
Block-seeded Monte Carlo integration over a chart box.

Samples are drawn in fixed-size blocks, block k from the stream
SeedSequence(seed, spawn_key=(k,)), and partial sums are combined in block
order. The estimate therefore depends only on (seed, n_samples,
block_size), never on the number of worker threads.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config import config

logger = logging.getLogger(__name__)

# integrand(X) -> ({channel: weights}, accepted mask), X an (N, 4) block of chart points
Integrand = Callable[[np.ndarray], Tuple[Dict[str, np.ndarray], np.ndarray]]


@dataclass
class MonteCarloEstimate:
    """Estimate of one integral with its standard error"""

    estimate: float
    standard_error: float
    n_samples: int
    n_accepted: int
    seed: int
    box_volume: float

    def to_dict(self) -> Dict:
        return {
            "estimate": self.estimate,
            "standard_error": self.standard_error,
            "n_samples": self.n_samples,
            "n_accepted": self.n_accepted,
            "seed": self.seed,
            "box_volume": self.box_volume,
        }

    def scaled(self, factor: float) -> "MonteCarloEstimate":
        return MonteCarloEstimate(self.estimate * factor, self.standard_error * abs(factor),
                                  self.n_samples, self.n_accepted, self.seed, self.box_volume)


@dataclass
class _BlockSums:
    sums: Dict[str, float]
    squares: Dict[str, float]
    accepted: int


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def integrate_box(lo: np.ndarray, hi: np.ndarray, integrand: Integrand, n_samples: int,
                  seed: int, block_size: Optional[int] = None,
                  workers: Optional[int] = None) -> Dict[str, MonteCarloEstimate]:
    """Estimate box_volume * mean(weights) per channel, with standard errors"""
    if n_samples < 2:
        raise ValueError("Monte Carlo integration needs at least 2 samples")
    block_size = block_size or config.block_size
    workers = workers or config.workers
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    widths = hi - lo
    if not np.all(np.isfinite(widths)) or np.any(widths < 0):
        raise ValueError(f"sampling box is not finite: {lo.tolist()} .. {hi.tolist()}")
    box_volume = float(np.prod(widths))

    n_blocks = -(-n_samples // block_size)

    def run_block(k: int) -> _BlockSums:
        size = min(block_size, n_samples - k * block_size)
        X = lo + widths * block_rng(seed, k).random((size, len(lo)))
        weights, accepted = integrand(X)
        return _BlockSums(
            sums={name: float(np.sum(w)) for name, w in weights.items()},
            squares={name: float(np.sum(w * w)) for name, w in weights.items()},
            accepted=int(np.count_nonzero(accepted)),
        )

    logger.debug(f"Monte Carlo: {n_samples} samples in {n_blocks} blocks, box volume {box_volume:.6e}")
    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks: List[_BlockSums] = list(pool.map(run_block, range(n_blocks)))
    else:
        blocks = [run_block(k) for k in range(n_blocks)]

    accepted = sum(b.accepted for b in blocks)
    results = {}
    for name in blocks[0].sums:
        total = sum(b.sums[name] for b in blocks)
        squares = sum(b.squares[name] for b in blocks)
        mean = total / n_samples
        variance = max(squares / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
        results[name] = MonteCarloEstimate(
            estimate=box_volume * mean,
            standard_error=box_volume * float(np.sqrt(variance / n_samples)),
            n_samples=n_samples,
            n_accepted=accepted,
            seed=seed,
            box_volume=box_volume,
        )
    return results
