"""Empirical CDFs, normal fits and sweep summaries."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pathloss import PathLossSample


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class NormalFit:
    mu: float
    sigma: float
    n: int


@dataclass(frozen=True)
class SweepSummary:
    fit: NormalFit
    wr_histogram: dict[int, int]
    clipped: int


def ecdf(values: Sequence[float]) -> list[tuple[float, float]]:
    """Right-continuous empirical CDF as ``(value, P[X <= value])`` steps, one per distinct value."""
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise ValueError("ecdf of an empty sample")
    uniq, idx = np.unique(x, return_index=True)
    # last occurrence of each distinct value gives its rank
    last = np.append(idx[1:], x.size)
    return [(float(v), float(r) / x.size) for v, r in zip(uniq, last)]


def ecdf_at(values: Sequence[float], grid: Iterable[float]) -> np.ndarray:
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise ValueError("ecdf of an empty sample")
    return np.searchsorted(x, np.asarray(list(grid), dtype=float), side="right") / x.size


def normal_fit(values: Sequence[float]) -> NormalFit:
    """Sample mean and population (1/n) standard deviation."""
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise InsufficientData(f"normal fit needs at least 2 values, got {x.size}")
    return NormalFit(float(x.mean()), float(x.std()), int(x.size))


def summarize_sweep(samples: Sequence[PathLossSample]) -> SweepSummary:
    """Normal fit of unclipped path loss, WR-count histogram and clipped count."""
    if not samples:
        raise ValueError("no samples to summarize")
    usable = [s.pl_db for s in samples if not s.clipped]
    clipped = len(samples) - len(usable)
    if len(usable) < 2:
        raise InsufficientData(
            f"{len(usable)} usable samples out of {len(samples)} ({clipped} clipped deep nulls)")
    hist = Counter(s.num_wr for s in samples)
    return SweepSummary(normal_fit(usable), {k: hist.get(k, 0) for k in (0, 1, 2)}, clipped)
