"""Time evolution of the packet widths, eta(t) and R(t).

Both packets spread with v_spr = hbar / (2 m dr0): m = M for the centre of
mass, m = mu for the relative motion. With this common prefactor
eta(t) -> (mu/M)/eta0 as t -> inf and eta0 = sqrt(mu/M) is a fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import entanglement
from .errors import ParameterError
from .params import HBAR, Mode, SystemParams, derive
from .wavepackets import CmPacket, cm_width, rel_width


@dataclass(frozen=True)
class PacketWidths:
    dr_cm: float
    dr_rel: float
    eta: float


def packet_widths(t, params: SystemParams) -> PacketWidths:
    d = derive(params)
    dr_cm = float(cm_width(t, CmPacket.from_derived(d)))
    dr_rel = float(rel_width(t, d))
    return PacketWidths(dr_cm, dr_rel, dr_cm / dr_rel)


@dataclass(frozen=True)
class EvolutionTrace:
    times: np.ndarray
    dr_cm: np.ndarray
    dr_rel: np.ndarray
    eta: np.ndarray
    r_e: np.ndarray
    r_i: np.ndarray

    COLUMNS = ("t", "dr_cm", "dr_rel", "eta", "r_e", "r_i")

    def rows(self):
        return zip(*(a.tolist() for a in (self.times, self.dr_cm, self.dr_rel, self.eta, self.r_e, self.r_i)))


def default_time_grid(params: SystemParams, points=401, span=(1e-2, 1e4)):
    """t = 0 followed by a log grid over span * max spreading time."""
    d = derive(params)
    t_max = max(d.t_spr_cm, d.t_spr_rel)
    return np.concatenate([[0.0], np.geomspace(span[0] * t_max, span[1] * t_max, points - 1)])


def evolve(params: SystemParams, t_grid=None) -> EvolutionTrace:
    times = default_time_grid(params) if t_grid is None else np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ParameterError("time grid must be a non-empty 1-D sequence")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ParameterError("time grid must be sorted and non-negative")
    d = derive(params)
    dr_cm = cm_width(times, CmPacket.from_derived(d))
    dr_rel = rel_width(times, d)
    eta = entanglement.eta(dr_cm, dr_rel)
    r = entanglement.entanglement_r(eta, params.m1, params.m2)
    # R_e and R_i coincide for the closed-form widths; kept separate in the record
    return EvolutionTrace(times=times, dr_cm=dr_cm, dr_rel=dr_rel, eta=eta, r_e=r, r_i=r.copy())


def eta_asymptote(params: SystemParams) -> float:
    """Long-time value of eta: (mu/M) / eta0."""
    return derive(params).eta_inf


def params_for_eta0(eta0, m1, m2, e_star=1.0, pole_ratio=1e-4, mode=Mode.IONIZATION) -> SystemParams:
    """Parameter set with a prescribed initial width ratio eta0.

    Binding energy 0.5 and excess energy ``e_star``; gamma = pole_ratio * E*.
    """
    if not eta0 > 0:
        raise ParameterError("eta0 must be positive")
    mu = m1 * m2 / (m1 + m2)
    gamma = pole_ratio * e_star / HBAR
    v = math.sqrt(2 * e_star / mu)
    dr_rel0 = v / (2 * gamma)
    return SystemParams(m1=m1, m2=m2, omega=e_star + 0.5, e0=-0.5, gamma=gamma,
                        dr_cm0=eta0 * dr_rel0, mode=mode)


def dissociation_preset(M1, M2, omega, gamma_d, dr_cm0, binding_energy=0.0) -> SystemParams:
    """Photodissociation of a diatomic into fragments M1 and M2.

    ``omega`` is the photon energy and ``binding_energy`` the dissociation
    energy; the fragments separate with v = sqrt(2 (omega - binding)/mu).
    """
    for name, value in (("M1", M1), ("M2", M2), ("omega", omega), ("gamma_d", gamma_d), ("dr_cm0", dr_cm0)):
        if not value > 0:
            raise ParameterError(f"{name} must be positive")
    return SystemParams(m1=M1, m2=M2, omega=omega, e0=-binding_energy, gamma=gamma_d,
                        dr_cm0=dr_cm0, mode=Mode.DISSOCIATION)
