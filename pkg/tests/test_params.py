import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from breakup.errors import ConfigError, ParameterError, ThresholdError
from breakup.params import (
    Mode,
    SystemParams,
    derive,
    golden_rule_rate,
    load_params,
    params_from_mapping,
)

positive = st.floats(1e-3, 1e3)


def test_derived_quantities_for_hydrogen(hydrogen):
    d = derive(hydrogen)
    mu = 1836.15267343 / 1837.15267343
    assert d.reduced_mass == pytest.approx(mu, rel=1e-15)
    assert d.e_star == pytest.approx(1.0)
    assert d.v == pytest.approx(math.sqrt(2 / mu), rel=1e-15)
    assert d.k_star == pytest.approx(math.sqrt(2 * mu), rel=1e-15)
    assert d.dr_rel0 == pytest.approx(d.v / (2 * 1e-4), rel=1e-15)
    assert d.eta_star == pytest.approx(math.sqrt(mu / 1837.15267343), rel=1e-15)
    assert d.t_spr_rel == pytest.approx(2 * d.t_zeta, rel=1e-15)


@given(m1=positive, m2=positive, dr=positive)
def test_eta_asymptote_is_dual_of_eta0(m1, m2, dr):
    d = derive(SystemParams(m1=m1, m2=m2, omega=1.5, e0=-0.5, gamma=1e-4, dr_cm0=dr))
    assert d.eta0 * d.eta_inf == pytest.approx(d.eta_star**2, rel=1e-12)


@given(m1=positive, dr=positive)
def test_spreading_velocities_follow_common_convention(m1, dr):
    d = derive(SystemParams(m1=m1, m2=1.0, omega=1.5, e0=-0.5, gamma=1e-4, dr_cm0=dr))
    assert d.v_spr_cm * d.t_spr_cm == pytest.approx(dr, rel=1e-12)
    assert d.v_spr_rel * d.t_spr_rel == pytest.approx(d.dr_rel0, rel=1e-12)


def test_threshold_is_rejected():
    with pytest.raises(ThresholdError):
        SystemParams(m1=1, m2=1, omega=0.5, e0=-0.5, gamma=1e-4, dr_cm0=1)


@pytest.mark.parametrize("field", ["m1", "m2", "gamma", "dr_cm0"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_non_positive_inputs_are_rejected(hydrogen, field, bad):
    with pytest.raises(ParameterError):
        hydrogen.replace(**{field: bad})


def test_golden_rule_rate():
    assert golden_rule_rate(0.01) == pytest.approx(math.pi * 1e-4, rel=1e-15)
    assert golden_rule_rate(0.01, probability_rate=True) == pytest.approx(2 * math.pi * 1e-4, rel=1e-15)
    with pytest.raises(ParameterError):
        golden_rule_rate(-1.0)


def test_mapping_accepts_dipole_coupling():
    p = params_from_mapping({"m1": "1", "m2": "2", "omega": "1", "e0": "-0.5",
                             "dipole_coupling": "0.01", "dr_cm0": "3", "mode": "Dissociation"})
    assert p.gamma == pytest.approx(math.pi * 1e-4)
    assert p.mode is Mode.DISSOCIATION


def test_mapping_errors():
    with pytest.raises(ConfigError, match="missing"):
        params_from_mapping({"m1": 1})
    with pytest.raises(ConfigError, match="number"):
        params_from_mapping({"m1": "one", "m2": 1, "omega": 1, "e0": 0, "gamma": 1, "dr_cm0": 1})
    with pytest.raises(ConfigError, match="mode"):
        params_from_mapping({"m1": 1, "m2": 1, "omega": 1, "e0": 0, "gamma": 1, "dr_cm0": 1, "mode": "x"})


def test_config_file_roundtrip(tmp_path, hydrogen):
    text = "\n".join(f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}"
                     for k, v in hydrogen.to_dict().items())
    path = tmp_path / "run.cfg"
    path.write_text("# comment line\n" + text + "  ; trailing\n")
    assert load_params(path) == hydrogen
