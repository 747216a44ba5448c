"""Numerical specular-ray check of the closed-form link geometry.

The street canyon is rebuilt as explicit 3D rectangles (one per facade per
block, plus the ground plane) and first-order reflections are located on each
rectangle with the image method; ``fermat_point`` finds the same point by
directly minimizing the travelled length. Nothing here uses the formulas in
``geometry``, which is what makes the comparison meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import geometry
from .geometry import HeightLookup, LinkGeometry
from .scenario import GridLayout

# roof-edge slack for floating-point specular heights
EDGE_TOL = 1e-9
LENGTH_RTOL = 1e-9


class DegenerateGeometry(ValueError):
    pass


@dataclass(frozen=True)
class Panel:
    """Axis-aligned rectangle in the plane ``p[axis] == offset``.

    ``u`` and ``v`` bound the two remaining coordinates in ascending axis order.
    The ``u`` extent is half-open ``[u0, u1)`` and ``v`` is closed, so a facade
    starts exactly at its block edge and its roof edge still reflects.
    """

    axis: int
    offset: float
    u: tuple[float, float]
    v: tuple[float, float]
    kind: str = "wall"
    side: Optional[int] = None
    block: Optional[int] = None

    def in_plane_axes(self) -> tuple[int, int]:
        a, b = (i for i in range(3) if i != self.axis)
        return a, b

    def contains(self, p: np.ndarray) -> bool:
        a, b = self.in_plane_axes()
        return (self.u[0] <= p[a] < self.u[1]
                and self.v[0] - EDGE_TOL <= p[b] <= self.v[1] + EDGE_TOL)


@dataclass
class Scene3D:
    ground: Panel
    facades: list[Panel] = field(default_factory=list)


@dataclass(frozen=True)
class RayPath:
    kind: str  # "LOS", "ground", "wall"
    length: float
    point: Optional[np.ndarray] = None
    side: Optional[int] = None
    block: Optional[int] = None


def build_scene(layout: GridLayout, heights: HeightLookup, x_lo: float, x_hi: float) -> Scene3D:
    """Facades for every block overlapping ``[x_lo, x_hi]`` plus one period of margin."""
    P = layout.period
    k0 = math.floor((x_lo - layout.offset) / P) - 1
    k1 = math.floor((x_hi - layout.offset) / P) + 1
    inf = math.inf
    ground = Panel(2, 0.0, (-inf, inf), (-inf, inf), kind="ground")
    facades = []
    for k in range(k0, k1 + 1):
        x0 = layout.offset + k * P
        for side, y in ((1, layout.S / 2.0), (2, -layout.S / 2.0)):
            facades.append(Panel(1, y, (x0, x0 + layout.W), (0.0, heights(side, k)),
                                 side=side, block=k))
    return Scene3D(ground, facades)


def mirror(p: np.ndarray, panel: Panel) -> np.ndarray:
    img = np.array(p, dtype=float)
    img[panel.axis] = 2.0 * panel.offset - img[panel.axis]
    return img


def _plane_point(tx, rx, panel: Panel) -> tuple[np.ndarray, np.ndarray]:
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    a = panel.axis
    dt, dr = tx[a] - panel.offset, rx[a] - panel.offset
    if dt == 0.0 or dr == 0.0:
        raise DegenerateGeometry("terminal lies in the reflecting plane")
    if (dt > 0) != (dr > 0):
        raise DegenerateGeometry("terminals on opposite sides of the reflecting plane")
    img = mirror(tx, panel)
    t = (panel.offset - img[a]) / (rx[a] - img[a])
    p = img + t * (rx - img)
    p[a] = panel.offset
    return p, img


def find_specular_point(tx, rx, panel: Panel) -> Optional[np.ndarray]:
    """Specular reflection point of ``tx -> panel -> rx`` or None if it misses the rectangle."""
    p, _ = _plane_point(tx, rx, panel)
    return p if panel.contains(p) else None


def reflected_length(tx, rx, panel: Panel) -> float:
    """Unfolded length: distance from the mirrored transmitter to the receiver."""
    return float(np.linalg.norm(mirror(tx, panel) - np.asarray(rx, dtype=float)))


def fermat_point(tx, rx, panel: Panel) -> np.ndarray:
    """Point of the (unbounded) panel plane minimizing ``|tx-p| + |p-rx|``."""
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    a, b = panel.in_plane_axes()

    def lift(q):
        p = np.empty(3)
        p[panel.axis] = panel.offset
        p[a], p[b] = q
        return p

    def f(q):
        p = lift(q)
        u, w = p - tx, p - rx
        nu, nw = np.linalg.norm(u), np.linalg.norm(w)
        grad = u / nu + w / nw
        return nu + nw, np.array([grad[a], grad[b]])

    start = 0.5 * np.array([tx[a] + rx[a], tx[b] + rx[b]])
    res = minimize(f, start, jac=True, method="BFGS", options={"gtol": 1e-13, "maxiter": 500})
    # polish with Newton steps on the analytic Hessian of the two distance terms
    q = res.x
    for _ in range(5):
        p = lift(q)
        H = np.zeros((2, 2))
        g = np.zeros(2)
        for s in (tx, rx):
            d = p - s
            n = np.linalg.norm(d)
            dd = np.array([d[a], d[b]])
            g += dd / n
            H += (np.eye(2) - np.outer(dd, dd) / n**2) / n
        q = q - np.linalg.solve(H, g)
    return lift(q)


def path_length_via(tx, rx, p) -> float:
    tx, rx, p = (np.asarray(v, dtype=float) for v in (tx, rx, p))
    return float(np.linalg.norm(p - tx) + np.linalg.norm(rx - p))


def snell_residual(tx, rx, p, panel: Panel) -> float:
    """|incidence angle - departure angle| in radians, both measured from the panel normal."""
    n = np.zeros(3)
    n[panel.axis] = 1.0

    def angle(v):
        normal = abs(float(v @ n))
        tangential = float(np.linalg.norm(v - (v @ n) * n))
        return math.atan2(tangential, normal)

    p = np.asarray(p, dtype=float)
    return abs(angle(np.asarray(tx) - p) - angle(np.asarray(rx) - p))


def segment_hits_panel(a, b, panel: Panel) -> bool:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da, db = a[panel.axis] - panel.offset, b[panel.axis] - panel.offset
    if da * db > 0 or da == db:
        return False
    t = da / (da - db)
    return panel.contains(a + t * (b - a))


def trace_link(scene: Scene3D, tx, rx) -> list[RayPath]:
    """LOS, ground bounce and every first-order facade reflection between tx and rx."""
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    paths = [RayPath("LOS", float(np.linalg.norm(rx - tx)))]
    pg = find_specular_point(tx, rx, scene.ground)
    if pg is not None:
        paths.append(RayPath("ground", reflected_length(tx, rx, scene.ground), pg))
    for panel in scene.facades:
        p = find_specular_point(tx, rx, panel)
        if p is not None:
            paths.append(RayPath("wall", reflected_length(tx, rx, panel), p, panel.side, panel.block))
    return paths


def link_endpoints(g: LinkGeometry) -> tuple[np.ndarray, np.ndarray]:
    """(UAV, vehicle) positions in the street frame."""
    return np.array([g.x_v + g.D, 0.0, g.H]), np.array([g.x_v, 0.0, g.h_v])


@dataclass
class ValidationReport:
    lengths_match: bool = True
    counts_match: bool = True
    max_rel_error: float = 0.0
    num_wr_oracle: int = 0
    num_wr_model: int = 0
    los_blocked: bool = False
    skipped: Optional[str] = None
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.skipped is not None or (self.lengths_match and self.counts_match
                                            and not self.los_blocked)


def verify_against_analytical(g: LinkGeometry, heights: HeightLookup) -> ValidationReport:
    rep = ValidationReport()
    if g.layout.S == 0.0:
        rep.skipped = "zero street width: facades coincide with the centerline"
        return rep
    uav, veh = link_endpoints(g)
    P = g.layout.period
    scene = build_scene(g.layout, heights, min(uav[0], veh[0]) - P, max(uav[0], veh[0]) + P)
    paths = trace_link(scene, uav, veh)
    model = geometry.analyze_link(g, heights)

    def check(name, oracle_len, model_len):
        err = abs(oracle_len - model_len) / model_len
        rep.max_rel_error = max(rep.max_rel_error, err)
        if err >= LENGTH_RTOL:
            rep.lengths_match = False
            rep.details.append(f"{name}: oracle {oracle_len!r} vs model {model_len!r}")

    by_kind = {}
    for p in paths:
        by_kind.setdefault(p.kind, []).append(p)
    check("LOS", by_kind["LOS"][0].length, model.d_los)
    if "ground" not in by_kind:
        rep.lengths_match = False
        rep.details.append("ground reflection missing")
    else:
        check("ground", by_kind["ground"][0].length, model.d_ref_g)
    walls = by_kind.get("wall", [])
    for w in walls:
        check(f"wall side {w.side} block {w.block}", w.length, model.d_ref_b)

    rep.num_wr_oracle = len(walls)
    rep.num_wr_model = model.num_wr
    oracle_sides = sorted(w.side for w in walls)
    model_sides = sorted(s.side for s in model.sides if s.wr)
    if oracle_sides != model_sides:
        rep.counts_match = False
        rep.details.append(f"wall reflections: oracle sides {oracle_sides} vs model sides {model_sides}")

    if any(segment_hits_panel(uav, veh, f) for f in scene.facades):
        rep.los_blocked = True
        rep.details.append("LOS segment intersects a facade")
    return rep
