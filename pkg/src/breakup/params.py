"""Physical parameters of a two-body breakup and the quantities derived from them.

Everything is in Hartree atomic units (hbar = m_e = e = 1). Particle 1 is the
light fragment (the electron in photoionization), particle 2 the heavy one.
"""

from __future__ import annotations

import configparser
import enum
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError, ParameterError, ThresholdError

HBAR = 1.0

# gamma / E* above this makes the pole (Weisskopf-Wigner) treatment meaningless
POLE_APPROX_LIMIT = 1e-2


class Mode(str, enum.Enum):
    IONIZATION = "ionization"
    DISSOCIATION = "dissociation"


@dataclass(frozen=True)
class SystemParams:
    """Inputs of a breakup calculation.

    Attributes
    ----------
    m1, m2 : float
        Fragment masses; m1 is the electron (or fragment M1), m2 the ion.
    omega : float
        Photon energy (hbar = 1).
    e0 : float
        Bound-state energy, normally negative.
    gamma : float
        Amplitude decay rate; ``2 * gamma`` is the golden-rule breakup rate.
    dr_cm0 : float
        Initial rms width of the centre-of-mass packet.
    mode : Mode
        Naming only; ionization and dissociation share every formula.
    """

    m1: float
    m2: float
    omega: float
    e0: float
    gamma: float
    dr_cm0: float
    mode: Mode = Mode.IONIZATION

    def __post_init__(self):
        for name in ("m1", "m2", "gamma", "dr_cm0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.omega) and math.isfinite(self.e0)):
            raise ParameterError("omega and e0 must be finite")
        if self.omega + self.e0 <= 0:
            raise ThresholdError(
                f"photon energy {self.omega} does not exceed binding energy {-self.e0}"
            )
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def e_star(self) -> float:
        return self.e0 + HBAR * self.omega

    @property
    def pole_ratio(self) -> float:
        """hbar*gamma / E*, small in the regime where the closed forms hold."""
        return HBAR * self.gamma / self.e_star

    def replace(self, **changes) -> "SystemParams":
        data = asdict(self)
        data.update(changes)
        return SystemParams(**data)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["mode"] = self.mode.value
        return data


@dataclass(frozen=True)
class DerivedParams:
    total_mass: float
    reduced_mass: float
    e_star: float
    v: float
    k_star: float
    dr_rel0: float
    t_spr_cm: float
    t_spr_rel: float
    t_zeta: float
    eta0: float
    eta_star: float
    eta_inf: float
    params: SystemParams = field(repr=False)

    @property
    def gamma(self) -> float:
        return self.params.gamma

    @property
    def mass_fractions(self) -> tuple[float, float]:
        """(m1/M, m2/M)."""
        return self.params.m1 / self.total_mass, self.params.m2 / self.total_mass

    @property
    def v_spr_cm(self) -> float:
        return HBAR / (2 * self.total_mass * self.params.dr_cm0)

    @property
    def v_spr_rel(self) -> float:
        return HBAR / (2 * self.reduced_mass * self.dr_rel0)


def derive(params: SystemParams) -> DerivedParams:
    """Collect every derived quantity of ``params``.

    ``t_spr_rel`` uses the same convention as the centre-of-mass packet,
    ``2 * mu * dr_rel0**2 / hbar``: the width has grown by sqrt(2) at that time.
    ``t_zeta = mu * dr_rel0**2 / hbar`` is the time unit of the profile
    parameter zeta used by :func:`breakup.wavepackets.rel_density`.
    """
    m1, m2 = params.m1, params.m2
    total = m1 + m2
    mu = m1 * m2 / total
    e_star = params.e_star
    v = math.sqrt(2 * e_star / mu)
    k_star = math.sqrt(2 * mu * e_star) / HBAR
    dr_rel0 = v / (2 * params.gamma)
    ratio = mu / total
    eta0 = params.dr_cm0 / dr_rel0
    return DerivedParams(
        total_mass=total,
        reduced_mass=mu,
        e_star=e_star,
        v=v,
        k_star=k_star,
        dr_rel0=dr_rel0,
        t_spr_cm=2 * total * params.dr_cm0**2 / HBAR,
        t_spr_rel=2 * mu * dr_rel0**2 / HBAR,
        t_zeta=mu * dr_rel0**2 / HBAR,
        eta0=eta0,
        eta_star=math.sqrt(ratio),
        eta_inf=ratio / eta0,
        params=params,
    )


def golden_rule_rate(dipole_coupling: float, probability_rate: bool = False) -> float:
    """Amplitude decay rate from the bound-free coupling |<E| d.E0/2 |0>|.

    The coupling is taken at E = E0 + omega with energy-normalised continuum
    states. Returns gamma = pi * coupling**2 / hbar, or the golden-rule
    probability rate 2*gamma when ``probability_rate`` is set.
    """
    if dipole_coupling < 0 or not math.isfinite(dipole_coupling):
        raise ParameterError("dipole coupling must be a non-negative magnitude")
    gamma = math.pi * dipole_coupling**2 / HBAR
    return 2 * gamma if probability_rate else gamma


_FLOAT_KEYS = ("m1", "m2", "omega", "e0", "gamma", "dr_cm0")


def params_from_mapping(values: Mapping[str, Any]) -> SystemParams:
    """Build SystemParams from string or numeric values.

    ``gamma`` may be replaced by ``dipole_coupling``, in which case the rate is
    obtained from :func:`golden_rule_rate`.
    """
    data = {str(k).strip().lower(): v for k, v in values.items()}
    if "gamma" not in data and "dipole_coupling" in data:
        data["gamma"] = golden_rule_rate(_as_float("dipole_coupling", data["dipole_coupling"]))
    missing = [k for k in _FLOAT_KEYS if k not in data]
    if missing:
        raise ConfigError(f"missing parameter(s): {', '.join(missing)}")
    kwargs = {k: _as_float(k, data[k]) for k in _FLOAT_KEYS}
    mode = str(data.get("mode", Mode.IONIZATION.value)).strip().lower()
    try:
        kwargs["mode"] = Mode(mode)
    except ValueError:
        raise ConfigError(f"unknown mode {mode!r}") from None
    return SystemParams(**kwargs)


def _as_float(key, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def read_config(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` file ('#' and ';' start comments)."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return dict(parser["run"])


def load_params(path: str | Path) -> SystemParams:
    return params_from_mapping(read_config(path))
