"""Closed-form link geometry for a UAV and a vehicle on a street centerline.

Frame: x runs along the street, the vehicle antenna sits at ``(x_v, 0, h_v)``
and the UAV at ``(x_v + D, 0, H)``. Facades of side 1 and side 2 lie in the
planes ``y = +S/2`` and ``y = -S/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .scenario import GridLayout

HeightLookup = Callable[[int, int], float]


@dataclass(frozen=True)
class LinkGeometry:
    D: float
    H: float
    h_v: float
    layout: GridLayout
    x_v: float = 0.0

    def __post_init__(self):
        if not self.D >= 0.0:
            raise ValueError(f"horizontal distance D must be >= 0, got {self.D}")
        if not self.h_v > 0.0:
            raise ValueError(f"vehicle antenna height must be positive, got {self.h_v}")
        if not self.H > self.h_v:
            raise ValueError(f"UAV altitude H={self.H} must exceed h_v={self.h_v}")


@dataclass(frozen=True)
class SideProfile:
    side: int
    on_facade: bool
    block: int
    h_p: Optional[float] = None
    H_c: Optional[float] = None
    wr: bool = False


@dataclass(frozen=True)
class MultipathBreakdown:
    d_los: float
    d_ref_g: float
    d_ref_b: float
    num_wr: int
    sides: tuple[SideProfile, SideProfile]


def los_distance(g: LinkGeometry) -> float:
    return math.hypot(g.D, g.H - g.h_v)


def ground_reflection_length(g: LinkGeometry) -> float:
    return math.hypot(g.D, g.H + g.h_v)


def wall_reflection_length(g: LinkGeometry) -> float:
    # image of the UAV across either facade sits a lateral distance S away
    return math.sqrt(g.layout.S**2 + g.D**2 + (g.H - g.h_v) ** 2)


def critical_altitude(h_p: float, h_v: float) -> float:
    """UAV altitude at which the specular point on a facade of height h_p reaches its roof edge."""
    return 2.0 * h_p - h_v


def reflection_midpoint(g: LinkGeometry) -> float:
    return g.x_v + g.D / 2.0


def facade_hit_test(x: float, layout: GridLayout) -> tuple[bool, int]:
    """Whether street-axis coordinate ``x`` faces a wall, and the enclosing/preceding block index."""
    rel = x - layout.offset
    k = math.floor(rel / layout.period)
    return (rel - k * layout.period) < layout.W, k


def analyze_link(g: LinkGeometry, heights: HeightLookup) -> MultipathBreakdown:
    on_facade, k = facade_hit_test(reflection_midpoint(g), g.layout)
    sides = []
    for side in (1, 2):
        if on_facade:
            h_p = heights(side, k)
            H_c = critical_altitude(h_p, g.h_v)
            sides.append(SideProfile(side, True, k, h_p, H_c, g.H <= H_c))
        else:
            sides.append(SideProfile(side, False, k))
    return MultipathBreakdown(
        d_los=los_distance(g),
        d_ref_g=ground_reflection_length(g),
        d_ref_b=wall_reflection_length(g),
        num_wr=sum(s.wr for s in sides),
        sides=(sides[0], sides[1]),
    )
