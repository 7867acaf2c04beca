"""Joint electron-ion (or fragment-fragment) state after photo-breakup.

Closed-form packet widths and the entanglement parameter R, the
relative-motion profile through the Faddeeva function, and brute-force
oracles that check each closed form independently.
"""

from .amplitudes import c0, ce, coulomb_phase, radial_high_energy
from .dynamics import EvolutionTrace, dissociation_preset, evolve, params_for_eta0
from .entanglement import (
    Regime,
    classify_regime,
    coincidence_widths,
    entanglement_r,
    eta_star,
    single_widths,
    width_report,
)
from .errors import (
    BreakupError,
    ConfigError,
    KernelRangeError,
    ParameterError,
    QuadratureError,
    ThresholdError,
)
from .figures import ZoneMap, fig_profiles, newmoon_zones
from .oracle import Model, build_grid, grid_widths, quad_rel_packet, run_suite
from .params import DerivedParams, Mode, SystemParams, derive, golden_rule_rate, load_params
from .wavepackets import faddeeva, rel_density, rel_density_sharp, rel_profile

__all__ = [
    "BreakupError", "ConfigError", "DerivedParams", "EvolutionTrace", "KernelRangeError", "Mode", "Model",
    "ParameterError", "QuadratureError", "Regime", "SystemParams", "ThresholdError", "ZoneMap",
    "build_grid", "c0", "ce", "classify_regime", "coincidence_widths", "coulomb_phase", "derive",
    "dissociation_preset", "entanglement_r", "eta_star", "evolve", "faddeeva", "fig_profiles",
    "golden_rule_rate", "grid_widths", "load_params", "newmoon_zones", "params_for_eta0",
    "quad_rel_packet", "radial_high_energy", "rel_density", "rel_density_sharp", "rel_profile",
    "run_suite", "single_widths", "width_report",
]
