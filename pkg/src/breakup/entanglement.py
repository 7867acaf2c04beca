"""Single-particle and coincidence widths and the entanglement parameter.

All widths are normalised by the relative-packet width and depend on the
state only through eta = dr_cm / dr_rel and the mass fractions. Particle 1
plays the electron, particle 2 the ion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

REGION_FACTOR = 10.0


class Regime(str, enum.Enum):
    REGION1 = "region1"
    REGION2 = "region2"
    REGION3 = "region3"
    CROSSOVER = "crossover"


def _fractions(m1, m2):
    if not (m1 > 0 and m2 > 0):
        raise ParameterError("masses must be positive")
    total = m1 + m2
    return m1 / total, m2 / total


def _check_eta(eta):
    eta = np.asarray(eta, dtype=float)
    if np.any(~(eta > 0)):
        raise ParameterError("eta must be positive")
    return eta


def eta(dr_cm, dr_rel):
    dr_cm = np.asarray(dr_cm, dtype=float)
    dr_rel = np.asarray(dr_rel, dtype=float)
    if np.any(~(dr_cm > 0)) or np.any(~(dr_rel > 0)):
        raise ParameterError("widths must be positive")
    return dr_cm / dr_rel


def single_widths(eta, m1, m2):
    """(electron, ion) single-particle widths sqrt(eta^2 + (m_i/M)^2), sqrt(eta^2 + (m_e/M)^2)."""
    eta = _check_eta(eta)
    fe, fi = _fractions(m1, m2)
    return np.hypot(eta, fi), np.hypot(eta, fe)


def coincidence_widths(eta, m1, m2):
    """(electron, ion) coincidence widths eta/sqrt(eta^2 + (m_e/M)^2), eta/sqrt(eta^2 + (m_i/M)^2).

    Exact for a Gaussian relative packet (conditional Gaussian variance).
    """
    eta = _check_eta(eta)
    fe, fi = _fractions(m1, m2)
    return eta / np.hypot(eta, fe), eta / np.hypot(eta, fi)


def entanglement_r(eta, m1, m2):
    """R = sqrt(eta + (m_i/M)^2/eta) * sqrt(eta + (m_e/M)^2/eta); R = 1 at eta = sqrt(mu/M)."""
    eta = _check_eta(eta)
    fe, fi = _fractions(m1, m2)
    return np.sqrt(eta + fi * fi / eta) * np.sqrt(eta + fe * fe / eta)


def eta_star(m1, m2):
    fe, fi = _fractions(m1, m2)
    return float(np.sqrt(fe * fi))


def classify_regime(eta, m1, m2, factor=REGION_FACTOR):
    """Operational version of the three asymptotic regions.

    ``factor`` stands in for "much less than"; with light/heavy fractions
    f_l <= f_h: region1 below f_l/factor, region3 above factor*f_h, region2
    between factor*f_l and f_h/factor, crossover anywhere else.
    """
    eta = float(_check_eta(eta))
    f_light, f_heavy = sorted(_fractions(m1, m2))
    if eta < f_light / factor:
        return Regime.REGION1
    if eta > factor * f_heavy:
        return Regime.REGION3
    if factor * f_light < eta < f_heavy / factor:
        return Regime.REGION2
    return Regime.CROSSOVER


@dataclass(frozen=True)
class WidthReport:
    eta: float
    s_e: float
    s_i: float
    c_e: float
    c_i: float
    r_e: float
    r_i: float
    regime: Regime

    def row(self):
        return (self.eta, self.s_e, self.c_e, self.s_i, self.c_i, self.r_e, self.r_i, self.regime.value)


REPORT_COLUMNS = ("eta", "s_e", "c_e", "s_i", "c_i", "r_e", "r_i", "regime")


def width_report(eta, m1, m2, factor=REGION_FACTOR) -> WidthReport:
    s_e, s_i = single_widths(eta, m1, m2)
    c_e, c_i = coincidence_widths(eta, m1, m2)
    return WidthReport(
        eta=float(eta), s_e=float(s_e), s_i=float(s_i), c_e=float(c_e), c_i=float(c_i),
        r_e=float(s_e / c_e), r_i=float(s_i / c_i),
        regime=classify_regime(eta, m1, m2, factor),
    )


def width_table(etas, m1, m2, factor=REGION_FACTOR) -> list[WidthReport]:
    return [width_report(e, m1, m2, factor) for e in np.asarray(etas, dtype=float).ravel()]
