"""Randomness: truncated exponentials, uniform node picks, seeded sub-streams."""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np


def log2_guard(x: float) -> float:
    """``max(1, log2 x)``, so tiny parameters never divide by zero."""
    return max(1.0, math.log2(x)) if x > 0 else 1.0


@dataclass(frozen=True)
class TexpParams:
    lam: float
    scale: float = 1.0

    def __post_init__(self):
        if not self.lam > 1:
            raise ValueError(f"truncated exponential needs lambda > 1, got {self.lam}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def mean(self) -> float:
        lam = self.lam
        return self.scale * (1.0 / lam - math.exp(-lam) / (1.0 - math.exp(-lam)))

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float) / self.scale, 0.0, 1.0)
        return -np.expm1(-self.lam * x) / -math.expm1(-self.lam)


def texp_inverse(u, lam: float):
    """Inverse CDF of Texp(lam) on [0, 1]."""
    return -np.log1p(-np.asarray(u) * -math.expm1(-lam)) / lam


def sample_texp(p: TexpParams, rng: np.random.Generator, size: Optional[int] = None):
    """``scale * X`` with ``X ~ Texp(lam)``, by inverting the CDF."""
    u = rng.random(size)
    x = texp_inverse(u, p.lam) * p.scale
    return float(x) if size is None else x


def pick_uniform(candidates: Iterable[int], rng: np.random.Generator) -> int:
    """Uniform pick: every candidate draws a random key, the largest key wins."""
    cands = sorted(candidates)
    if not cands:
        raise ValueError("cannot pick from an empty candidate set")
    keys = rng.random(len(cands))
    return cands[int(np.argmax(keys))]


def make_rng(seed: int, tag: str = "", *idx: int) -> np.random.Generator:
    """Generator keyed by (root seed, phase tag, indices)."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(tag.encode())] + [int(i) for i in idx]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def substream(rng: np.random.Generator, tag: str, *idx: int) -> np.random.Generator:
    """Child stream of ``rng`` for one algorithm phase.

    Draws one word from the parent, so successive calls on the same parent
    give distinct children while remaining reproducible.
    """
    word = int(rng.integers(0, 2 ** 63))
    return make_rng(word, tag, *idx)
