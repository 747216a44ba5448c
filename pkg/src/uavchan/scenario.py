"""ITU-R P.1410 built-up area parameters, Manhattan-grid layout and building heights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class BuiltUpParams:
    """Statistical description of a built-up area.

    alpha: fraction of land covered by buildings, in (0, 1].
    beta: mean number of buildings per km^2.
    gamma: Rayleigh scale of the building height distribution, in meters.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise InvalidParams(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.beta > 0.0:
            raise InvalidParams(f"beta must be positive, got {self.beta}")
        if not self.gamma > 0.0:
            raise InvalidParams(f"gamma must be positive, got {self.gamma}")


class Preset(Enum):
    SUBURBAN = "suburban"
    URBAN = "urban"
    DENSE_URBAN = "dense-urban"
    HIGH_RISE_URBAN = "high-rise-urban"

    @classmethod
    def parse(cls, name: str) -> "Preset":
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        aliases = {"dense": "dense-urban", "denseurban": "dense-urban",
                   "high-rise": "high-rise-urban", "highriseurban": "high-rise-urban"}
        key = aliases.get(key, key)
        for p in cls:
            if p.value == key:
                return p
        raise InvalidParams(f"unknown scenario preset {name!r}")


_TABLE = {
    Preset.SUBURBAN: BuiltUpParams(0.1, 750.0, 8.0),
    Preset.URBAN: BuiltUpParams(0.3, 500.0, 15.0),
    Preset.DENSE_URBAN: BuiltUpParams(0.5, 300.0, 20.0),
    Preset.HIGH_RISE_URBAN: BuiltUpParams(0.5, 300.0, 50.0),
}


def preset_params(preset: Preset | str) -> BuiltUpParams:
    if isinstance(preset, str):
        preset = Preset.parse(preset)
    return _TABLE[preset]


@dataclass(frozen=True)
class GridLayout:
    """Square buildings of side ``W`` separated by streets of width ``S`` (meters).

    ``offset`` is the street-axis coordinate where block 0 starts; block ``k``
    occupies ``[offset + k*(W+S), offset + k*(W+S) + W)``.
    """

    W: float
    S: float
    offset: float = 0.0

    def __post_init__(self):
        if not self.W > 0.0:
            raise InvalidParams(f"building width W must be positive, got {self.W}")
        if not self.S >= 0.0:
            raise InvalidParams(f"street width S must be non-negative, got {self.S}")

    @property
    def period(self) -> float:
        return self.W + self.S


def derive_grid(params: BuiltUpParams, offset: float = 0.0) -> GridLayout:
    W = 1000.0 * math.sqrt(params.alpha / params.beta)
    # clamp the rounding residue at alpha == 1
    S = max(1000.0 / math.sqrt(params.beta) - W, 0.0)
    return GridLayout(W, S, offset)


def rayleigh_pdf(h, gamma: float):
    """Normalized Rayleigh density ``h/gamma^2 * exp(-h^2 / (2 gamma^2))``, zero for h < 0."""
    if not gamma > 0.0:
        raise InvalidParams(f"gamma must be positive, got {gamma}")
    h = np.asarray(h, dtype=float)
    out = np.where(h >= 0.0, h / gamma**2 * np.exp(-(h**2) / (2.0 * gamma**2)), 0.0)
    return float(out) if out.ndim == 0 else out


def rayleigh_cdf(h, gamma: float):
    if not gamma > 0.0:
        raise InvalidParams(f"gamma must be positive, got {gamma}")
    h = np.maximum(np.asarray(h, dtype=float), 0.0)
    out = -np.expm1(-(h**2) / (2.0 * gamma**2))
    return float(out) if out.ndim == 0 else out


def rayleigh_inverse_cdf(u, gamma: float):
    u = np.asarray(u, dtype=float)
    out = gamma * np.sqrt(-2.0 * np.log1p(-u))
    return float(out) if out.ndim == 0 else out


def _zigzag(k: int) -> int:
    return 2 * k if k >= 0 else -2 * k - 1


def _uniform(seed: int, side: int, k: int) -> float:
    # 53-bit float in [0, 1) from a counter-based draw keyed by (seed, side, block)
    ss = np.random.SeedSequence(seed, spawn_key=(side, _zigzag(k)))
    word = int(ss.generate_state(1, np.uint64)[0])
    return (word >> 11) * 2.0**-53


@dataclass
class HeightField:
    """Rayleigh building heights, generated lazily per ``(side, block)`` index.

    Each height is a pure function of ``(seed, side, k)``, so any block can be
    queried in any order with identical results.
    """

    gamma: float
    seed: int
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise InvalidParams(f"gamma must be positive, got {self.gamma}")
        if self.seed < 0:
            raise InvalidParams(f"seed must be non-negative, got {self.seed}")

    def height(self, side: int, k: int) -> float:
        key = (side, k)
        h = self._cache.get(key)
        if h is None:
            h = rayleigh_inverse_cdf(_uniform(self.seed, side, k), self.gamma)
            self._cache[key] = h
        return h

    def __call__(self, side: int, k: int) -> float:
        return self.height(side, k)


@dataclass(frozen=True)
class ConstantHeights:
    """Every building on side 1 has height ``h1`` and on side 2 ``h2``."""

    h1: float
    h2: float | None = None

    def height(self, side: int, k: int) -> float:
        if side == 2 and self.h2 is not None:
            return self.h2
        return self.h1

    def __call__(self, side: int, k: int) -> float:
        return self.height(side, k)


def sample_heights(params: BuiltUpParams | float, seed: int,
                   indices: Iterable[tuple[int, int]]) -> np.ndarray:
    """Heights for the given ``(side, k)`` indices, identical to ``HeightField`` lookups."""
    gamma = params.gamma if isinstance(params, BuiltUpParams) else float(params)
    u = np.array([_uniform(seed, side, k) for side, k in indices], dtype=float)
    return gamma * np.sqrt(-2.0 * np.log1p(-u))


def fit_rayleigh(heights: Sequence[float]) -> float:
    """Maximum-likelihood Rayleigh scale ``sqrt(sum(h^2) / (2n))``."""
    h = np.asarray(heights, dtype=float)
    if h.size == 0:
        raise ValueError("cannot fit a Rayleigh scale to an empty sample")
    if np.any(h < 0):
        raise ValueError("heights must be non-negative")
    return float(np.sqrt(np.sum(h**2) / (2.0 * h.size)))
