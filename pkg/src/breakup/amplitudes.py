"""Ground-state and continuum amplitudes under a suddenly switched-on field.

Rotating-wave approximation, rectangular pulse, continuum adiabatically
eliminated into a pure decay of the ground state (no level shift). The
bound-free coupling d_E0 . E0 / 2 is frozen at its value at E* (flat coupling).
"""

import numpy as np
from scipy.special import loggamma

from .errors import ParameterError
from .params import HBAR, SystemParams


def c0(t, params: SystemParams):
    """Ground-state amplitude exp(-i E0 t / hbar - gamma t)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("time must be non-negative")
    return np.exp((-1j * params.e0 / HBAR - params.gamma) * t)


def ce(energy, t, coupling, params: SystemParams):
    """Continuum amplitude density C_E(t) (amplitude per sqrt(energy)).

    ``coupling`` is d_E0 . E0 / 2; choosing ``coupling**2 = hbar*gamma/pi``
    makes the long-time continuum population exactly 1.
    """
    energy = np.asarray(energy, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("time must be non-negative")
    g = params.gamma
    detuning = energy - params.e0 - HBAR * params.omega
    bound = np.exp(-(1j * params.e0 / HBAR + g) * t)
    free = np.exp(-1j * (energy / HBAR - params.omega) * t)
    return coupling / (detuning + 1j * HBAR * g) * (bound - free)


def ce_population_limit(energy, coupling, params: SystemParams):
    """|C_E(t -> inf)|^2: Lorentzian of half-width hbar*gamma centred on E*."""
    detuning = np.asarray(energy, dtype=float) - params.e_star
    return coupling**2 / (detuning**2 + (HBAR * params.gamma) ** 2)


def coulomb_phase(k, mu, l=1):
    """Coulomb phase shift arg Gamma(l + 1 + i*eta_s) for an attractive unit charge.

    eta_s = -1/(k a0) with a0 = hbar^2/(mu e^2).
    """
    a0 = HBAR**2 / mu
    return np.imag(loggamma(l + 1 - 1j / (np.asarray(k) * a0)))


def radial_high_energy(r, energy, params: SystemParams, include_coulomb_phase=True):
    """High-energy asymptote of the energy-normalised l=1 Coulomb radial function.

    sqrt(2 mu / (pi k)) / (hbar r) * cos(k r + ln(2 k r)/(k a0) + delta_1);
    with ``include_coulomb_phase=False`` the logarithm and delta_1 are dropped.
    """
    r = np.asarray(r, dtype=float)
    energy = np.asarray(energy, dtype=float)
    if np.any(r <= 0):
        raise ParameterError("radius must be positive")
    if np.any(energy <= 0):
        raise ParameterError("energy must be positive")
    mu = params.m1 * params.m2 / (params.m1 + params.m2)
    k = np.sqrt(2 * mu * energy) / HBAR
    phase = k * r
    if include_coulomb_phase:
        a0 = HBAR**2 / mu
        phase = phase + np.log(2 * k * r) / (k * a0) + coulomb_phase(k, mu)
    return np.sqrt(2 * mu / (np.pi * k)) / (HBAR * r) * np.cos(phase)
