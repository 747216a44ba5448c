"""Coherent two-ray plus wall-reflection path loss and parameter sweeps."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import HeightLookup, LinkGeometry, analyze_link
from .scenario import BuiltUpParams, GridLayout, HeightField, derive_grid

SPEED_OF_LIGHT = 299_792_458.0
AMPLITUDE_FLOOR = 1e-12


@dataclass(frozen=True)
class RadioConfig:
    frequency: float = 4e9
    gamma_b: float = 1.0
    gamma_g: float = 1.0

    def __post_init__(self):
        if not self.frequency > 0.0:
            raise ValueError(f"frequency must be positive, got {self.frequency}")
        for name in ("gamma_b", "gamma_g"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency


@dataclass(frozen=True)
class PathLossSample:
    D: float
    H: float
    pl_db: float
    num_wr: int
    d_los: float
    d_ref_g: float
    d_ref_b: float
    dphi_g: float
    dphi_b: float
    clipped: bool = False


def phase_difference(d_los: float, d_ref: float, wavelength: float) -> float:
    """Phase of a reflected ray relative to LOS, ``2*pi/lambda * (d_los - d_ref)`` (never positive)."""
    if d_ref < d_los:
        raise ValueError(f"reflected path {d_ref} shorter than LOS {d_los}")
    return 2.0 * math.pi / wavelength * (d_los - d_ref)


def fspl(d: float, wavelength: float) -> float:
    if not d > 0.0:
        raise ValueError(f"distance must be positive, got {d}")
    return 20.0 * math.log10(4.0 * math.pi * d / wavelength)


def coherent_path_loss(d_los: float, dphi_g: float, dphi_b: float, num_wr: int,
                       radio: RadioConfig) -> tuple[float, bool]:
    """Path loss in dB for given phases, and whether the amplitude floor was hit.

    The field factor is ``1 + Gg*exp(i dphi_g) + n*Gb*exp(i dphi_b)`` with ``n``
    wall reflections; both walls share one path length so their terms coincide.
    """
    F = 1.0 + radio.gamma_g * cmath.exp(1j * dphi_g) + num_wr * radio.gamma_b * cmath.exp(1j * dphi_b)
    amp = abs(F)
    clipped = amp < AMPLITUDE_FLOOR
    if clipped:
        amp = AMPLITUDE_FLOOR
    return fspl(d_los, radio.wavelength) - 20.0 * math.log10(amp), clipped


def path_loss_bu(g: LinkGeometry, heights: HeightLookup, radio: RadioConfig) -> PathLossSample:
    mb = analyze_link(g, heights)
    if mb.d_los == 0.0:
        raise ValueError("link distance is zero")
    lam = radio.wavelength
    dphi_g = phase_difference(mb.d_los, mb.d_ref_g, lam)
    dphi_b = phase_difference(mb.d_los, mb.d_ref_b, lam)
    pl, clipped = coherent_path_loss(mb.d_los, dphi_g, dphi_b, mb.num_wr, radio)
    return PathLossSample(g.D, g.H, pl, mb.num_wr, mb.d_los, mb.d_ref_g, mb.d_ref_b,
                          dphi_g, dphi_b, clipped)


def sweep_values(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive ``start..stop`` grid; points are ``start + i*step`` to avoid drift."""
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"empty range [{start}, {stop}]")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def _resolve(params: BuiltUpParams, seed: int, layout: Optional[GridLayout],
             heights: Optional[HeightLookup]):
    return (layout if layout is not None else derive_grid(params),
            heights if heights is not None else HeightField(params.gamma, seed))


def sweep_horizontal(D_range: tuple[float, float], step: float, H: float,
                     params: BuiltUpParams, seed: int, radio: RadioConfig, *,
                     h_v: float = 1.5, x_v: float = 0.0,
                     layout: Optional[GridLayout] = None,
                     heights: Optional[HeightLookup] = None) -> list[PathLossSample]:
    layout, heights = _resolve(params, seed, layout, heights)
    return [path_loss_bu(LinkGeometry(float(D), H, h_v, layout, x_v), heights, radio)
            for D in sweep_values(D_range[0], D_range[1], step)]


def sweep_vertical(H_range: tuple[float, float], step: float, D: float,
                   params: BuiltUpParams, seed: int, radio: RadioConfig, *,
                   h_v: float = 1.5, x_v: float = 0.0,
                   layout: Optional[GridLayout] = None,
                   heights: Optional[HeightLookup] = None) -> list[PathLossSample]:
    if H_range[0] <= h_v:
        raise ValueError(f"lowest altitude {H_range[0]} must exceed h_v={h_v}")
    layout, heights = _resolve(params, seed, layout, heights)
    return [path_loss_bu(LinkGeometry(D, float(H), h_v, layout, x_v), heights, radio)
            for H in sweep_values(H_range[0], H_range[1], step)]
