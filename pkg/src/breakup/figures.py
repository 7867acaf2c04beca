"""Data series behind the figures, and the detector-zone construction.

Nothing is rendered; every figure is a set of :class:`~breakup.tables.Table`
objects that plotting tools can consume.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, entanglement, oracle, wavepackets
from .errors import ParameterError
from .params import SystemParams, derive
from .tables import Table

# ---------------------------------------------------------------------------
# new-moon zones


class Overlap(str, enum.Enum):
    INSIDE = "inside"
    EDGE = "edge"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Dot:
    center: tuple[float, float]
    radius: float
    overlap: Overlap
    inside_fraction: float
    joint_weight: float


@dataclass(frozen=True)
class ZoneMap:
    """Level set of the in-plane relative density (ion at the origin, field along z).

    ``segments`` has shape (n, 2, 2): end points (x, z) of each contour piece.
    ``on_edge[k, j]`` marks end points placed on the r = v t discontinuity
    rather than interpolated from the smooth part of the density.
    """

    level: float
    peak: float
    vt: float
    x: np.ndarray
    z: np.ndarray
    density: np.ndarray
    segments: np.ndarray
    on_edge: np.ndarray
    dots: list[Dot] = field(default_factory=list)

    @property
    def contour(self) -> np.ndarray:
        return np.unique(self.segments.reshape(-1, 2), axis=0)

    @property
    def cell_size(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def zone_mask(self) -> np.ndarray:
        return self.density >= self.level * self.peak

    @property
    def zone_area(self) -> float:
        return float(np.count_nonzero(self.zone_mask)) * self.cell_size**2


def plane_density(x, z, t, d, core=None):
    """Sharp-edge relative density in the (x, z) plane, z along the field.

    Inside ``core`` (default 2 dr_rel0, the minimum of e^{r/dr0}/r^2) the
    density is dominated by the not-yet-decayed 1/r^2 remnant and is set to 0.
    """
    core = 2 * d.dr_rel0 if core is None else core
    x, z = np.asarray(x, float), np.asarray(z, float)
    r = np.hypot(x, z)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_t = np.where(r > 0, z / np.where(r > 0, r, 1.0), 0.0)
    # cos^2 applied directly so that z -> -z is an exact symmetry
    value = wavepackets.rel_density_sharp(r, 0.0, t, d) * cos_t**2
    return np.where(r >= core, value, 0.0)


def _symmetric_axis(half_extent, n):
    k = np.arange(n, dtype=float)
    return half_extent * (2 * k - (n - 1)) / (n - 1)


def _circle_hit(p, q, radius):
    """Point on segment p->q at distance ``radius`` from the origin."""
    dp = q - p
    a = dp @ dp
    b = 2 * (p @ dp)
    c = p @ p - radius**2
    disc = max(b * b - 4 * a * c, 0.0)
    roots = [(-b - math.sqrt(disc)) / (2 * a), (-b + math.sqrt(disc)) / (2 * a)]
    s = min((r for r in roots if -1e-12 <= r <= 1 + 1e-12), key=lambda r: abs(r - 0.5), default=0.5)
    return p + min(max(s, 0.0), 1.0) * dp


# corners in order (i, j), (i+1, j), (i+1, j+1), (i, j+1); edges between consecutive corners
_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0))


def _marching_segments(x, z, values, level, inside, vt):
    """Linear-interpolation marching squares; crossings of the r = vt step
    are placed on the circle itself."""
    above = values >= level
    corners = (above[:-1, :-1].astype(int) + 2 * above[1:, :-1] + 4 * above[1:, 1:] + 8 * above[:-1, 1:])
    mixed = np.argwhere((corners != 0) & (corners != 15))
    segments, flags = [], []
    for i, j in mixed:
        idx = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))
        pts = [np.array([x[a], z[b]]) for a, b in idx]
        vals = [values[a, b] for a, b in idx]
        ins = [inside[a, b] for a, b in idx]
        cross = []
        for e0, e1 in _EDGES:
            if (vals[e0] >= level) == (vals[e1] >= level):
                continue
            hi_k, lo_k = (e0, e1) if vals[e0] >= level else (e1, e0)
            if ins[hi_k] and not ins[lo_k]:
                cross.append((_circle_hit(pts[hi_k], pts[lo_k], vt), True))
            else:
                s = (level - vals[e0]) / (vals[e1] - vals[e0])
                cross.append((pts[e0] + s * (pts[e1] - pts[e0]), False))
        if len(cross) == 2:
            pairs = [(0, 1)]
        else:
            # saddle: decide the connection from the cell-centre average
            centre_above = np.mean(vals) >= level
            bits = corners[i, j]
            pairs = [(0, 3), (1, 2)] if (bits == 5) == centre_above else [(0, 1), (2, 3)]
        for a, b in pairs:
            segments.append((cross[a][0], cross[b][0]))
            flags.append((cross[a][1], cross[b][1]))
    if not segments:
        return np.empty((0, 2, 2)), np.empty((0, 2), dtype=bool)
    return np.array(segments), np.array(flags)


def newmoon_zones(t, params: SystemParams, level=1 / 3, dots=None, resolution=512,
                  dot_radius=None, extent=1.1) -> ZoneMap:
    """Regions where the relative density is at least ``level`` times its maximum.

    The maximum is taken on the polarization axis just inside the edge
    r = v t. ``dots`` are detector positions (x, z) in the same units
    (atomic units, ion at the origin); each is treated as a disc of radius
    ``dot_radius`` (default: the cm width at t) and classified as inside,
    on the edge of, or outside the zones.
    """
    if not 0 < level < 1:
        raise ParameterError("level must lie strictly between 0 and 1")
    d = derive(params)
    if d.gamma * t < 3:
        raise ParameterError("zones need gamma*t >= 3 (after the breakup is complete)")
    vt = d.v * t
    axis = _symmetric_axis(extent * vt, resolution)
    xx, zz = np.meshgrid(axis, axis, indexing="ij")
    density = plane_density(xx, zz, t, d)
    peak = float(wavepackets.rel_density_sharp(vt, 0.0, t, d))
    inside = np.hypot(xx, zz) <= vt
    segments, flags = _marching_segments(axis, axis, density, level * peak, inside, vt)
    radius = float(wavepackets.cm_width(t, wavepackets.CmPacket.from_derived(d))) if dot_radius is None else dot_radius
    classified = [_classify_dot(c, radius, t, d, level * peak) for c in (dots or [])]
    return ZoneMap(level=level, peak=peak, vt=vt, x=axis, z=axis, density=density,
                   segments=segments, on_edge=flags, dots=classified)


def _classify_dot(center, radius, t, d, threshold, rings=12, spokes=48):
    cx, cz = map(float, center)
    r = radius * np.sqrt((np.arange(rings) + 0.5) / rings)
    phi = 2 * np.pi * np.arange(spokes) / spokes
    px = np.concatenate([[cx], (cx + r[:, None] * np.cos(phi)).ravel()])
    pz = np.concatenate([[cz], (cz + r[:, None] * np.sin(phi)).ravel()])
    dens = plane_density(px, pz, t, d)
    hit = dens >= threshold
    frac = float(np.count_nonzero(hit)) / hit.size
    overlap = Overlap.INSIDE if hit.all() else Overlap.OUTSIDE if not hit.any() else Overlap.EDGE
    # the ring samples are equal-area: their mean times the disc area
    weight = float(np.mean(dens[1:])) * math.pi * radius**2
    return Dot(center=(cx, cz), radius=radius, overlap=overlap, inside_fraction=frac, joint_weight=weight)


# ---------------------------------------------------------------------------
# figure datasets

FIGURE_IDS = ("fig1a", "fig1b", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8")


def _log_grid_with(lo, hi, n, *extra):
    grid = np.geomspace(lo, hi, n)
    return np.unique(np.concatenate([grid, np.asarray(extra, dtype=float)]))


def _fig1(zeta, rho):
    prof = wavepackets.rel_profile(zeta, rho)
    return [Table(f"fig1_zeta{zeta:g}", ("rho", "zeta", "density"), list(prof.rows()),
                  "relative-motion shape S(rho, zeta)")]


def _fig2():
    m1, m2, eta, gamma_t = 0.2, 1.0, 0.5, 4.0
    grid = oracle.build_grid(oracle.Model.GAUSSIAN_EXPONENTIAL, eta, m1, m2, gamma_t=gamma_t, resolution=256)
    frac1, frac2 = grid.fractions
    edge = 2 * gamma_t
    xe = np.linspace(-3 * eta, 3 * eta + frac2 * (edge + 1), 121)
    xi = np.linspace(-3 * eta - frac1 * (edge + 1), 3 * eta, 121)
    dens = oracle.particle_frame_density(grid, xe, xi)
    rows = [(float(a), float(b), float(dens[p, q])) for p, a in enumerate(xe) for q, b in enumerate(xi)]
    return [Table("fig2_density", ("x_e", "x_i", "density"), rows,
                  "1-D joint density, m_e/m_i=0.2, eta=0.5, gamma*t=4, lengths in dr_rel0")]


def _fig3():
    m1, m2 = 0.1, 1.0
    etas = _log_grid_with(1e-3, 1e2, 201, entanglement.eta_star(m1, m2))
    s_e, s_i = entanglement.single_widths(etas, m1, m2)
    c_e, c_i = entanglement.coincidence_widths(etas, m1, m2)
    rows = list(zip(etas.tolist(), s_e.tolist(), c_e.tolist(), s_i.tolist(), c_i.tolist()))
    return [Table("fig3_widths", ("eta", "s_e", "c_e", "s_i", "c_i"), rows, "m_e/m_i = 0.1")]


def _r_table(name, m1, m2, lo, hi, n, description):
    etas = _log_grid_with(lo, hi, n, entanglement.eta_star(m1, m2))
    r = entanglement.entanglement_r(etas, m1, m2)
    rows = list(zip(np.log(etas).tolist(), etas.tolist(), r.tolist()))
    return Table(name, ("ln_eta", "eta", "r"), rows, description)


def _fig4():
    return [_r_table("fig4_r", 0.1, 1.0, 1e-4, 1e2, 301, "R(eta), m_e/m_i = 0.1")]


def _evolution(name, eta0):
    # m_e/M = 0.1
    params = dynamics.params_for_eta0(eta0, 1.0, 9.0)
    d = derive(params)
    trace = dynamics.evolve(params, dynamics.default_time_grid(params, points=401, span=(1e-3, 1e3)))
    rows = list(zip((trace.times / d.t_spr_rel).tolist(), (trace.dr_cm / d.dr_rel0).tolist(),
                    (trace.dr_rel / d.dr_rel0).tolist(), trace.eta.tolist(), trace.r_e.tolist()))
    return [Table(name, ("t_over_tspr_rel", "dr_cm", "dr_rel", "eta", "r"), rows,
                  f"eta0={eta0:g}, m_e/M=0.1, widths in units of dr_rel0")]


def fig7_params() -> SystemParams:
    """Hydrogen ionization, eta0 = 0.5, observed at gamma*t = 5."""
    return dynamics.params_for_eta0(0.5, 1.0, 1836.15267343)


def _fig7():
    params = fig7_params()
    d = derive(params)
    t = 5.0 / d.gamma
    vt = d.v * t
    dots = [(0.0, 0.97 * vt), (0.55 * vt, 0.55 * vt), (0.9 * vt, 0.05 * vt), (0.0, 1.3 * vt)]
    zones = newmoon_zones(t, params, dots=dots, resolution=512, extent=1.4)
    segs = zones.segments / vt
    seg_rows = [(float(s[0, 0]), float(s[0, 1]), float(s[1, 0]), float(s[1, 1]), bool(f[0]), bool(f[1]))
                for s, f in zip(segs, zones.on_edge)]
    dot_rows = [(dot.center[0] / vt, dot.center[1] / vt, dot.radius / vt, dot.overlap.value,
                 dot.inside_fraction, dot.joint_weight) for dot in zones.dots]
    return [
        Table("fig7_contour", ("x0", "z0", "x1", "z1", "edge0", "edge1"), seg_rows,
              "1/3-of-maximum contour segments, lengths in units of v t"),
        Table("fig7_dots", ("x", "z", "radius", "overlap", "inside_fraction", "joint_weight"), dot_rows,
              "detector discs of radius dr_cm(t), lengths in units of v t"),
    ]


def _fig8():
    return [
        _r_table("fig8_molecular", 1.0, 1.0, 1e-8, 1e8, 401, "M1 = M2"),
        _r_table("fig8_atomic", 1e-4, 1.0, 1e-8, 1e8, 401, "m_e/m_i = 1e-4"),
    ]


def fig_profiles(which) -> list[Table]:
    """Tables for one figure id (see FIGURE_IDS)."""
    builders = {
        "fig1a": lambda: _fig1(0.01, np.linspace(-10.0, 5.0, 1501)),
        "fig1b": lambda: _fig1(20.0, np.linspace(-60.0, 60.0, 1201)),
        "fig2": _fig2,
        "fig3": _fig3,
        "fig4": _fig4,
        "fig5": lambda: _evolution("fig5_trace", 0.05),
        "fig6": lambda: _evolution("fig6_trace", 0.5),
        "fig7": _fig7,
        "fig8": _fig8,
    }
    if which not in builders:
        raise ParameterError(f"unknown figure id {which!r}; choose from {', '.join(FIGURE_IDS)}")
    return builders[which]()
