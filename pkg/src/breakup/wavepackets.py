"""Centre-of-mass and relative-motion densities and their widths.

The relative packet is expressed through the dimensionless coordinate
rho = (r_rel - v t) / dr_rel0 and the spreading parameter zeta = t / t_zeta,
with t_zeta = mu * dr_rel0**2 / hbar.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import wofz

from .errors import KernelRangeError, ParameterError
from .params import HBAR, DerivedParams

FADDEEVA_LIMIT = 1e4


class ValidityWarning(UserWarning):
    """A formula is evaluated outside the regime it was derived for."""


@dataclass(frozen=True)
class CmPacket:
    dr0: float
    mass: float

    @classmethod
    def from_derived(cls, d: DerivedParams) -> "CmPacket":
        return cls(dr0=d.params.dr_cm0, mass=d.total_mass)

    @property
    def t_spr(self) -> float:
        return 2 * self.mass * self.dr0**2 / HBAR


def cm_width(t, p: CmPacket):
    """rms width per axis of the freely spreading Gaussian cm packet."""
    t = np.asarray(t, dtype=float)
    return np.hypot(p.dr0, HBAR * t / (2 * p.mass * p.dr0))


def cm_density(r_cm, t, p: CmPacket):
    """|Psi_cm|^2 at cm position(s) ``r_cm`` (last axis of length 3)."""
    r_cm = np.asarray(r_cm, dtype=float)
    width = cm_width(t, p)
    r2 = np.sum(r_cm**2, axis=-1)
    return np.exp(-r2 / (2 * width**2)) / ((2 * np.pi) ** 1.5 * width**3)


def rel_width(t, d: DerivedParams):
    """Relative-packet width: dr_rel0 early, v_spr_rel * t late, hypot in between."""
    t = np.asarray(t, dtype=float)
    return np.hypot(d.dr_rel0, d.v_spr_rel * t)


def rel_density_sharp(r_rel, theta, t, d: DerivedParams):
    """Residue-method density: outgoing shell with a sharp edge at r = v t.

    Integrates to 1 - exp(-2 gamma t) over space; the remainder is still bound.
    """
    if t < 3.0 / d.gamma:
        warnings.warn(
            f"sharp-edge packet used at gamma*t = {d.gamma * t:.3g} < 3", ValidityWarning, stacklevel=2
        )
    r = np.asarray(r_rel, dtype=float)
    g, v = d.gamma, d.v
    inside = r <= v * t
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        value = (
            3.0 / (4 * np.pi) * (2 * g / v) * np.cos(theta) ** 2 / r**2
            * np.exp(-2 * g * (t - np.minimum(r, v * t) / v))
        )
    return np.where(inside & (r > 0), value, 0.0)


def faddeeva(z):
    """Faddeeva function w(z) = exp(-z^2) erfc(-i z).

    Backed by scipy's implementation of the Poppe-Wijers / Johnson algorithm;
    inputs with |Re z| or |Im z| above 1e4 are rejected.
    """
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise KernelRangeError("faddeeva: non-finite argument")
    if np.any(np.abs(z.real) > FADDEEVA_LIMIT) or np.any(np.abs(z.imag) > FADDEEVA_LIMIT):
        raise KernelRangeError(f"faddeeva: |Re z| and |Im z| must not exceed {FADDEEVA_LIMIT:g}")
    return wofz(z)


def complex_erf(z):
    """erf(z) through the Faddeeva kernel."""
    z = np.asarray(z, dtype=complex)
    return 1.0 - np.exp(-(z**2)) * faddeeva(1j * z)


def rel_density(rho, zeta, theta=0.0):
    """Dimensionless relative-motion shape S(rho, zeta) times cos^2(theta).

    S = e^rho |1 - erf(sqrt(i/2) (sqrt(zeta)/2 - i rho/sqrt(zeta)))|^2 and
    integrates to 4 over the real line for every zeta. The physical density
    is 3/(16 pi dr_rel0) * cos^2(theta) / r^2 * S.

    e^rho and |erfc|^2 overflow separately; with z the erfc argument,
    Re(z^2) = rho/2 exactly, so for Re z >= 0 S reduces to |w(iz)|^2 and
    for Re z < 0 to |2 e^(rho/2) - exp(-i Im(z^2)) w(-iz)|^2.
    """
    if not zeta > 0:
        raise ParameterError("zeta must be positive")
    rho = np.asarray(rho, dtype=float)
    a = math.sqrt(zeta) / 2
    b = rho / math.sqrt(zeta)
    # iz = ((b - a) + i(a + b)) / 2
    iz = 0.5 * ((b - a) + 1j * (a + b))
    right = (a + b) >= 0
    w = faddeeva(np.where(right, iz, -iz))
    with np.errstate(over="ignore", under="ignore"):
        half = np.exp(np.minimum(rho, 0.0) / 2)
    phase = np.exp(-0.5j * (a * a - b * b))
    left_value = np.abs(2 * half - phase * w) ** 2
    shape = np.where(right, np.abs(w) ** 2, left_value)
    return shape * np.cos(theta) ** 2


def lorentzian_shape(rho, zeta):
    """Large-zeta limit of S: (2/pi) zeta / (rho^2 + zeta^2/4); half-width zeta/2."""
    rho = np.asarray(rho, dtype=float)
    return (2 / np.pi) * zeta / (rho**2 + zeta**2 / 4)


def sharp_shape(rho):
    """Small-zeta limit of S: 4 e^rho for rho < 0, else 0."""
    rho = np.asarray(rho, dtype=float)
    return np.where(rho < 0, 4 * np.exp(np.minimum(rho, 0.0)), 0.0)


def rel_density_physical(r_rel, theta, t, d: DerivedParams):
    """|Psi_rel|^2 from the erf-form profile at time t (zeta = t / t_zeta)."""
    r = np.asarray(r_rel, dtype=float)
    rho = (r - d.v * t) / d.dr_rel0
    zeta = t / d.t_zeta
    return 3.0 / (16 * np.pi * d.dr_rel0) * np.cos(theta) ** 2 / r**2 * rel_density(rho, zeta)


@dataclass(frozen=True)
class RelProfile:
    zeta: float
    rho_grid: np.ndarray
    density: np.ndarray

    def rows(self):
        for rho, s in zip(self.rho_grid, self.density):
            yield (float(rho), self.zeta, float(s))


def rel_profile(zeta, rho_grid) -> RelProfile:
    rho = np.asarray(rho_grid, dtype=float)
    return RelProfile(zeta=float(zeta), rho_grid=rho, density=rel_density(rho, zeta))
