"""Brute-force references for the closed forms.

* :func:`quad_rel_packet` integrates the outgoing-wave energy integral of the
  relative packet directly (flat prefactors at E*, k(E) to second order), with
  panels split at the nodes of the quadratic phase around its stationary point
  and analytic end corrections from two rounds of integration by parts.
* :func:`build_grid` / :func:`grid_widths` sample the one-dimensional joint
  density |Psi(x_e, x_i)|^2 and take moments by direct summation.
* :func:`continuum_population`, :func:`sharp_norm` and :func:`profile_norm`
  are quadrature checks of unitarity and normalisation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import amplitudes, entanglement, wavepackets
from .errors import ParameterError, QuadratureError
from .params import POLE_APPROX_LIMIT, HBAR, DerivedParams, SystemParams, derive
from .quadrature import integrate

# ---------------------------------------------------------------------------
# energy integral of the relative packet


def reference_params() -> SystemParams:
    """Hydrogen-like ionization with hbar*gamma/E* = 1e-4 (used when none given)."""
    return SystemParams(m1=1.0, m2=1836.15267343, omega=1.5, e0=-0.5, gamma=1e-4, dr_cm0=1.0)


def _phase_nodes(s0, zeta, lo, hi):
    """Abscissae in [lo, hi] where zeta (s - s0)^2 / 2 is a multiple of pi."""
    nodes = []
    for side, length in ((1.0, hi - s0), (-1.0, s0 - lo)):
        if length <= 0:
            continue
        n_max = int(zeta * length**2 / (2 * math.pi))
        n = np.arange(1, n_max + 1)
        nodes.append(s0 + side * np.sqrt(2 * math.pi * n / zeta))
    if lo < s0 < hi:
        nodes.append(np.array([s0]))
    return np.concatenate(nodes) if nodes else np.empty(0)


def _tail_terms(s, rho, zeta, upper):
    """Integration-by-parts expansion of the tail beyond s (two terms).

    Integrand f e^{i phi} with f = 1/(s + i/2), phi' = p = rho - zeta s.
    g0 = f/(i p), g1 = (g0)'/(i p); upper tail = e^{i phi}(-g0 + g1),
    lower tail = e^{i phi}(g0 - g1).
    """
    c = 0.5j
    p = rho - zeta * s
    g0 = 1 / ((s + c) * 1j * p)
    g1 = 1 / ((s + c) ** 2 * p**2) - zeta / ((s + c) * p**3)
    e = np.exp(1j * (rho * s - 0.5 * zeta * s * s))
    return e * (-g0 + g1) if upper else e * (g0 - g1)


def _packet_amplitude(rho, zeta, d: DerivedParams, atol):
    """Energy integral int dE e^{-iEt + i k(E) r} / (E - E* + i gamma) at one rho."""
    g = d.gamma
    # phase per unit detuning eps: alpha*eps - beta*eps^2
    alpha = rho * d.dr_rel0 / d.v
    beta = zeta * d.t_zeta / (2 * d.reduced_mass * d.v**2) if zeta > 0 else 0.0

    def integrand_s(s):
        eps = 2 * g * s
        return 2 * g * np.exp(1j * (alpha * eps - beta * eps * eps) / HBAR) / (eps + 1j * HBAR * g)

    # window and panel edges in the scaled detuning s = eps / (2 gamma)
    if zeta > 0:
        s0 = rho / zeta
        reach = max(10.0, 100.0 / math.sqrt(1.0 + zeta))
        dist = max(10.0, 10.0 * zeta) / zeta
        lo = min(-reach, s0 - dist)
        hi = max(reach, s0 + dist)
        nodes = _phase_nodes(s0, zeta, lo, hi)
    else:
        if abs(rho) < 1e-3:
            raise ParameterError("linear-k packet needs |rho| >= 1e-3 (principal value at the edge)")
        reach = max(100.0, 2000.0 / abs(rho))
        lo, hi = -reach, reach
        step = math.pi / abs(rho)
        nodes = np.arange(lo + step, hi, step)
    core = np.linspace(-5.0, 5.0, 41)
    edges = np.unique(np.concatenate([[lo, hi], nodes, core[(core > lo) & (core < hi)]]))
    # keep panels from degenerating near coinciding nodes
    edges = edges[np.concatenate([[True], np.diff(edges) > 1e-9])]
    body = integrate(integrand_s, edges, atol=atol).value
    tails = _tail_terms(hi, rho, zeta, upper=True) + _tail_terms(lo, rho, zeta, upper=False)
    return body + tails


def quad_rel_packet(rho_grid, zeta, params: SystemParams | None = None, quadratic=True,
                    atol=2 * math.pi * 1e-10):
    """S(rho, zeta) on ``rho_grid`` by direct quadrature of the energy integral.

    The result is normalised like :func:`breakup.wavepackets.rel_density`
    (|integral|^2 / pi^2). ``quadratic=False`` drops the dispersion term of
    k(E) and gives the sharp-edge packet (zeta is then ignored).
    """
    params = params or reference_params()
    if params.pole_ratio > POLE_APPROX_LIMIT:
        raise ParameterError(
            f"hbar*gamma/E* = {params.pole_ratio:.3g} is outside the pole-approximation regime"
        )
    if quadratic and not zeta > 0:
        raise ParameterError("zeta must be positive")
    d = derive(params)
    z_eff = zeta if quadratic else 0.0
    rho = np.atleast_1d(np.asarray(rho_grid, dtype=float))
    out = np.empty(rho.shape)
    for i, r in enumerate(rho.flat):
        amp = _packet_amplitude(float(r), z_eff, d, atol)
        out.flat[i] = abs(amp) ** 2 / math.pi**2
    return out


# ---------------------------------------------------------------------------
# normalisation and unitarity


def sharp_norm(t, d: DerivedParams, atol=1e-13):
    """3-D integral of the sharp-edge packet; exact value 1 - exp(-2 gamma t)."""
    vt = d.v * t

    def radial(r):
        return r**2 * wavepackets.rel_density_sharp(r, 0.0, t, d)

    edges = np.linspace(0.0, vt, 65)
    radial_part = integrate(radial, edges, atol=atol).value
    theta_edges = np.linspace(0.0, math.pi, 9)
    angular = integrate(lambda th: 2 * math.pi * np.sin(th) * np.cos(th) ** 2, theta_edges, atol=1e-15).value
    return radial_part * angular


def profile_norm(zeta, params: SystemParams | None = None, atol=1e-9):
    """3-D integral of the erf-form density at t = zeta * t_zeta.

    Radial range r in (0, inf), i.e. rho in (-2 gamma t, inf). Beyond the
    Faddeeva range the Lorentzian asymptote is integrated analytically.
    """
    params = params or reference_params()
    d = derive(params)
    t = zeta * d.t_zeta
    rho_min = -d.v * t / d.dr_rel0
    reach = 0.5 * wavepackets.FADDEEVA_LIMIT * math.sqrt(zeta)
    lo, hi = max(rho_min, -reach), reach
    edges = np.unique(np.concatenate([
        [lo, hi],
        np.linspace(max(lo, -60.0), min(hi, 60.0), 241),
        np.geomspace(60.0, hi, 80) if hi > 60 else [],
        -np.geomspace(60.0, -lo, 80) if lo < -60 else [],
    ]))
    body = integrate(lambda r: wavepackets.rel_density(r, zeta), edges, atol=atol).value

    def lorentz_cdf(x):
        return (4 / math.pi) * math.atan(2 * x / zeta)

    tail = (2.0 - lorentz_cdf(hi)) + (lorentz_cdf(lo) - lorentz_cdf(rho_min))
    # (1/4) int S drho; the angular factor integrates to 1 with the 3/(16 pi) prefactor
    return 0.25 * (body + tail)


def continuum_population(t, params: SystemParams, coupling=None, atol=1e-9):
    """int_0^inf |C_E(t)|^2 dE by adaptive quadrature plus an analytic far tail."""
    g = params.gamma
    coupling = math.sqrt(HBAR * g / math.pi) if coupling is None else coupling
    e_star = params.e_star
    if t == 0:
        return 0.0
    upper = 2 * e_star
    period = 2 * math.pi * HBAR / t
    # panels no wider than half an oscillation period, refined around E*
    n_osc = int(math.ceil(upper / (0.5 * period)))
    base = np.linspace(0.0, upper, max(n_osc, 64) + 1)
    local = e_star + HBAR * g * np.concatenate([-np.geomspace(1e-3, 1e3, 60), [0.0], np.geomspace(1e-3, 1e3, 60)])
    edges = np.unique(np.concatenate([base, local[(local > 0) & (local < upper)]]))

    def density(e):
        return np.abs(amplitudes.ce(e, t, coupling, params)) ** 2

    body = integrate(density, edges, atol=atol).value
    # beyond 2E*, |C_E|^2 -> coupling^2 (1 + e^{-2gt} - 2e^{-gt}cos) / x^2; the
    # oscillating part is O(1/(t x^2)) and dropped
    tail = coupling**2 * (1 + math.exp(-2 * g * t)) / (upper - e_star)
    return body + tail


def unitarity(t, params: SystemParams):
    """|C0(t)|^2 + int |C_E(t)|^2 dE with coupling^2 = hbar gamma / pi."""
    return float(abs(amplitudes.c0(t, params)) ** 2) + continuum_population(t, params)


# ---------------------------------------------------------------------------
# one-dimensional joint density


class Model(str, enum.Enum):
    GAUSSIAN_GAUSSIAN = "gaussian-gaussian"
    GAUSSIAN_EXPONENTIAL = "gaussian-exponential"


_CM_SPAN = 8.0  # cm extent in standard deviations
_GAUSS_SPAN = 8.0
_EXP_SPAN = 30.0  # decay lengths behind the edge


def _gauss_pdf(sigma):
    return lambda x: np.exp(-0.5 * (x / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))


def _edge_pdf(edge):
    def pdf(x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= edge, np.exp(np.minimum(x - edge, 0.0)), 0.0)
    return pdf


@dataclass(frozen=True)
class JointDensityGrid:
    """|Psi(x_e, x_i)|^2 sampled on a lattice of cell centres in (x_cm, x_rel).

    Lengths are in units of the relative width. The map to particle
    coordinates, x_e = x_cm + (m2/M) x_rel and x_i = x_cm - (m1/M) x_rel, has
    unit Jacobian, so ``cell_area`` is also the area element in (x_e, x_i).
    ``xe_grid``/``xi_grid`` are the particle coordinates of every cell.
    """

    model: Model
    eta: float
    m1: float
    m2: float
    gamma_t: float | None
    x_cm: np.ndarray
    x_rel: np.ndarray
    density: np.ndarray
    cell_area: float
    cm_pdf: Callable
    rel_pdf: Callable
    rel_support: tuple[float, float]

    @property
    def fractions(self):
        total = self.m1 + self.m2
        return self.m1 / total, self.m2 / total

    @property
    def xe_grid(self):
        _, frac2 = self.fractions
        return self.x_cm[:, None] + frac2 * self.x_rel[None, :]

    @property
    def xi_grid(self):
        frac1, _ = self.fractions
        return self.x_cm[:, None] - frac1 * self.x_rel[None, :]

    @property
    def normalization(self) -> float:
        return float(np.sum(self.density)) * self.cell_area

    def pdf(self, xe, xi):
        """Joint density at particle coordinates."""
        frac1, frac2 = self.fractions
        xe, xi = np.asarray(xe, float), np.asarray(xi, float)
        return self.cm_pdf(frac1 * xe + frac2 * xi) * self.rel_pdf(xe - xi)


def _cells(lo, hi, n):
    h = (hi - lo) / n
    return lo + h * (np.arange(n) + 0.5), h


def build_grid(model, eta, m1, m2, gamma_t=None, resolution=1024) -> JointDensityGrid:
    """Sample the joint density of a Gaussian cm packet (rms ``eta``) and a
    relative packet of unit width.

    ``gaussian-gaussian``: Gaussian relative packet of unit rms.
    ``gaussian-exponential``: one-sided exponential of unit decay length with
    its edge at x_rel = 2 gamma t (the 1-D analogue of the sharp-edge packet).
    """
    model = Model(model)
    if resolution < 64:
        raise ParameterError("resolution must be at least 64 points per dimension")
    if not eta > 0:
        raise ParameterError("eta must be positive")
    if not (m1 > 0 and m2 > 0):
        raise ParameterError("masses must be positive")
    if model is Model.GAUSSIAN_EXPONENTIAL:
        if gamma_t is None or not gamma_t > 0:
            raise ParameterError("the exponential model needs gamma_t > 0")
        edge = 2.0 * gamma_t
        rel_pdf = _edge_pdf(edge)
        support = (edge - _EXP_SPAN, edge)
    else:
        rel_pdf = _gauss_pdf(1.0)
        support = (-_GAUSS_SPAN, _GAUSS_SPAN)
    cm_pdf = _gauss_pdf(eta)
    x_cm, h_cm = _cells(-_CM_SPAN * eta, _CM_SPAN * eta, resolution)
    x_rel, h_rel = _cells(support[0], support[1], resolution)
    density = cm_pdf(x_cm)[:, None] * rel_pdf(x_rel)[None, :]
    area = h_cm * h_rel
    density = density / (np.sum(density) * area)
    return JointDensityGrid(
        model=model, eta=float(eta), m1=float(m1), m2=float(m2),
        gamma_t=None if gamma_t is None else float(gamma_t),
        x_cm=x_cm, x_rel=x_rel, density=density, cell_area=area,
        cm_pdf=cm_pdf, rel_pdf=rel_pdf, rel_support=support,
    )


@dataclass(frozen=True)
class GridWidths:
    """Moment widths from a joint-density grid (units of the relative width)."""

    s_e: float
    s_i: float
    c_e: float | None = None
    c_i: float | None = None

    @property
    def r_e(self):
        return None if self.c_e is None else self.s_e / self.c_e

    @property
    def r_i(self):
        return None if self.c_i is None else self.s_i / self.c_i


def _weighted_std(x, w):
    # numpy's pairwise summation: fixed order, so results are reproducible
    w = w / np.sum(w)
    mean = np.sum(w * x)
    return float(np.sqrt(np.sum(w * (x - mean) ** 2)))


def _slice_std(grid: JointDensityGrid, center_of_cm, slope, n):
    """std of x_rel along a line x_cm = center_of_cm + slope * x_rel."""
    lo, hi = grid.rel_support
    reach = _CM_SPAN * grid.eta
    bounds = sorted([(-reach - center_of_cm) / slope, (reach - center_of_cm) / slope])
    lo, hi = max(lo, bounds[0]), min(hi, bounds[1])
    if not hi > lo:
        raise ParameterError("conditioning position lies outside the support of the density")
    u, _ = _cells(lo, hi, n)
    w = grid.cm_pdf(center_of_cm + slope * u) * grid.rel_pdf(u)
    if not np.sum(w) > 0:
        raise ParameterError("conditioning position lies outside the support of the density")
    return _weighted_std(u, w)


def grid_widths(grid: JointDensityGrid, conditional_at=None, slice_points=4096) -> GridWidths:
    """Single-particle widths by moment sums over the whole grid and, when
    ``conditional_at = (x_e*, x_i*)`` is given, coincidence widths: the rms of
    x_e along the slice x_i = x_i* and of x_i along x_e = x_e*.
    """
    if min(grid.density.shape) < 64:
        raise ParameterError("grid too coarse: need at least 64 points per dimension")
    w = grid.density * grid.cell_area
    s_e = _weighted_std(grid.xe_grid, w)
    s_i = _weighted_std(grid.xi_grid, w)
    if conditional_at is None:
        return GridWidths(s_e=s_e, s_i=s_i)
    xe_star, xi_star = conditional_at
    frac1, frac2 = grid.fractions
    # at fixed x_i: x_cm = x_i* + (m1/M) x_rel, x_e = x_i* + x_rel
    c_e = _slice_std(grid, xi_star, frac1, slice_points)
    # at fixed x_e: x_cm = x_e* - (m2/M) x_rel, x_i = x_e* - x_rel
    c_i = _slice_std(grid, xe_star, -frac2, slice_points)
    return GridWidths(s_e=s_e, s_i=s_i, c_e=c_e, c_i=c_i)


def grid_means(grid: JointDensityGrid):
    """(<x_e>, <x_i>) by moment sums."""
    w = grid.density * grid.cell_area
    return float(np.sum(w * grid.xe_grid)), float(np.sum(w * grid.xi_grid))


def particle_frame_density(grid: JointDensityGrid, xe_axis, xi_axis):
    """Evaluate the grid's joint density on a rectangular (x_e, x_i) mesh."""
    xe, xi = np.meshgrid(np.asarray(xe_axis, float), np.asarray(xi_axis, float), indexing="ij")
    return grid.pdf(xe, xi)


# ---------------------------------------------------------------------------
# suites of closed-form vs oracle comparisons


@dataclass(frozen=True)
class OracleCase:
    case_id: str
    closed_form: float
    oracle: float
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tolerance)

    def row(self):
        return (self.case_id, self.closed_form, self.oracle, self.deviation, self.passed)


PROFILE_ZETAS = (0.01, 0.3, 1.0, 5.0, 20.0)
WIDTH_ETAS = tuple(10.0**k for k in range(-3, 4))
WIDTH_MASS_RATIOS = (1e-4, 0.1, 0.2, 1.0)


def profile_cases(zetas=PROFILE_ZETAS, rho_grid=None, tolerance=1e-5):
    """Max deviation of the closed-form profile from the quadrature, per zeta,
    relative to the profile peak over the grid."""
    rho = np.linspace(-10.0, 3.0, 131) if rho_grid is None else np.asarray(rho_grid, float)
    cases = []
    for zeta in zetas:
        closed = wavepackets.rel_density(rho, zeta)
        brute = quad_rel_packet(rho, zeta)
        peak = float(np.max(closed))
        k = int(np.argmax(np.abs(closed - brute)))
        dev = float(np.max(np.abs(closed - brute))) / peak
        cases.append(OracleCase(f"profile/zeta={zeta:g}/rho={rho[k]:g}", float(closed[k]),
                                float(brute[k]), dev, tolerance))
    return cases


def width_cases(etas=WIDTH_ETAS, mass_ratios=WIDTH_MASS_RATIOS, tolerance=1e-4, resolution=512):
    """Gaussian-model moment widths against the closed-form widths."""
    cases = []
    for ratio in mass_ratios:
        m1, m2 = ratio, 1.0
        for eta in etas:
            grid = build_grid(Model.GAUSSIAN_GAUSSIAN, eta, m1, m2, resolution=resolution)
            got = grid_widths(grid, conditional_at=(0.0, 0.0))
            s_e, s_i = entanglement.single_widths(eta, m1, m2)
            c_e, c_i = entanglement.coincidence_widths(eta, m1, m2)
            for name, closed, brute in (("s_e", s_e, got.s_e), ("s_i", s_i, got.s_i),
                                        ("c_e", c_e, got.c_e), ("c_i", c_i, got.c_i)):
                closed = float(closed)
                cases.append(OracleCase(f"widths/ratio={ratio:g}/eta={eta:g}/{name}", closed, brute,
                                        abs(brute - closed) / closed, tolerance))
    return cases


def normalization_cases(zetas=(0.01, 1.0, 20.0), tolerance=1e-4):
    params = reference_params()
    d = derive(params)
    cases = [OracleCase(f"norm/erf/zeta={z:g}", 1.0, profile_norm(z, params),
                        abs(profile_norm(z, params) - 1.0), tolerance) for z in zetas]
    for gt in (3.0, 10.0):
        t = gt / d.gamma
        exact = 1 - math.exp(-2 * gt)
        got = sharp_norm(t, d)
        cases.append(OracleCase(f"norm/sharp/gamma_t={gt:g}", exact, got, abs(got - exact), 1e-9))
    return cases


def unitarity_cases(tolerance=1e-3):
    params = reference_params()
    g = params.gamma
    cases = []
    for label, t in (("0", 0.0), ("1/gamma", 1 / g), ("10/gamma", 10 / g)):
        total = unitarity(t, params)
        cases.append(OracleCase(f"unitarity/t={label}", 1.0, total, abs(total - 1.0), tolerance))
    return cases


SUITES = {
    "profile": profile_cases,
    "widths": width_cases,
    "normalization": normalization_cases,
    "unitarity": unitarity_cases,
}


def run_suite(name="all"):
    if name == "all":
        return [case for suite in SUITES.values() for case in suite()]
    if name not in SUITES:
        raise ParameterError(f"unknown oracle suite {name!r}; choose from all, {', '.join(SUITES)}")
    return SUITES[name]()


__all__ = [
    "GridWidths", "JointDensityGrid", "Model", "OracleCase", "QuadratureError",
    "build_grid", "continuum_population", "grid_means", "grid_widths", "particle_frame_density",
    "profile_norm", "quad_rel_packet", "reference_params", "run_suite", "sharp_norm", "unitarity",
]
