import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from breakup import wavepackets as wp
from breakup.errors import KernelRangeError, ParameterError
from breakup.params import derive
from breakup.quadrature import integrate

mpmath.mp.dps = 40


def mp_shape(rho, zeta):
    z = mpmath.sqrt(1j / 2) * (mpmath.sqrt(zeta) / 2 - 1j * rho / mpmath.sqrt(zeta))
    return float(mpmath.exp(rho) * abs(mpmath.erfc(z)) ** 2)


def test_faddeeva_on_imaginary_axis():
    # w(i) = e * erfc(1)
    assert wp.faddeeva(1j).real == pytest.approx(0.42758357615580700, rel=1e-15)
    assert abs(wp.faddeeva(1j).imag) < 1e-16


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_faddeeva_matches_mpmath(x, y):
    z = complex(x, y)
    if y < -5 and x * x - y * y < -600:
        return  # exp(-z^2) overflows; out of interest here
    exact = complex(mpmath.exp(-mpmath.mpc(z) ** 2) * mpmath.erfc(-1j * mpmath.mpc(z)))
    assert abs(wp.faddeeva(z) - exact) <= 1e-12 * max(1.0, abs(exact))


def test_faddeeva_rejects_out_of_range():
    with pytest.raises(KernelRangeError):
        wp.faddeeva(2e4 + 0j)
    with pytest.raises(KernelRangeError):
        wp.faddeeva(complex(0, math.nan))


def test_complex_erf_on_real_axis():
    x = np.linspace(-3, 3, 13)
    assert np.allclose(wp.complex_erf(x).real, [math.erf(v) for v in x], atol=1e-15)


@given(st.floats(-60, 60), st.floats(1e-3, 1e3))
def test_shape_matches_extended_precision(rho, zeta):
    exact = mp_shape(rho, zeta)
    assert wp.rel_density(rho, zeta) == pytest.approx(exact, rel=1e-9, abs=1e-300)


@given(st.floats(1e-4, 1e4))
def test_shape_is_finite_and_non_negative(zeta):
    reach = 1e4 * math.sqrt(zeta)
    rho = np.linspace(-reach, reach, 2001)
    s = wp.rel_density(rho, zeta)
    assert np.all(np.isfinite(s)) and np.all(s >= 0)
    with pytest.raises(KernelRangeError):
        wp.rel_density(5 * reach, zeta)


@settings(max_examples=15)
@given(st.floats(1e-2, 1e2))
def test_shape_integrates_to_four(zeta):
    reach = 40.0 + 20.0 * zeta
    edges = np.linspace(-reach, reach, 161)
    body = integrate(lambda r: wp.rel_density(r, zeta), edges, atol=1e-10).value
    # 1/rho^2 tails outside; S ~ (2/pi) zeta / rho^2 there
    tail = 2 * (2 / math.pi) * (math.pi / 2 - math.atan(2 * reach / zeta)) * 2
    assert body + tail == pytest.approx(4.0, abs=2e-4)


def test_theta_factor():
    assert wp.rel_density(0.3, 2.0, theta=math.pi / 3) == pytest.approx(0.25 * wp.rel_density(0.3, 2.0), rel=1e-14)
    assert wp.rel_density(0.3, 2.0, theta=math.pi / 2) == pytest.approx(0.0, abs=1e-30)


def test_zeta_must_be_positive():
    with pytest.raises(ParameterError):
        wp.rel_density(0.0, 0.0)


def test_sharp_limit_converges_like_sqrt_zeta():
    rho = np.linspace(-5, -0.5, 451)
    errors = []
    for zeta in (1e-2, 1e-3, 1e-4, 1e-5):
        s = wp.rel_density(rho, zeta)
        errors.append(np.max(np.abs(s - wp.sharp_shape(rho)) / wp.sharp_shape(rho)))
    ratios = np.array(errors[:-1]) / np.array(errors[1:])
    assert np.all(np.abs(ratios - math.sqrt(10)) < 0.3)
    assert errors[2] < 0.02


def test_lorentzian_limit_converges_like_inverse_zeta():
    errors = []
    for zeta in (1e2, 1e3, 1e4):
        rho = np.linspace(-1.5 * zeta, 1.5 * zeta, 601)
        l = wp.lorentzian_shape(rho, zeta)
        errors.append(np.max(np.abs(wp.rel_density(rho, zeta) - l) / l))
    assert errors[0] > errors[1] > errors[2]
    assert errors[1] / errors[2] == pytest.approx(10, rel=0.1)
    assert errors[2] < 1e-3


def test_small_zeta_right_side_is_a_weak_tail():
    # the 1/rho^2 tail keeps S(rho > 5) at about 1e-5 of the peak for zeta = 0.01
    rho = np.linspace(5, 50, 200)
    peak = np.max(wp.rel_density(np.linspace(-3, 1, 4001), 0.01))
    ratio = np.max(wp.rel_density(rho, 0.01)) / peak
    assert 1e-6 < ratio < 1e-4


def test_width_formulas(hydrogen):
    d = derive(hydrogen)
    cm = wp.CmPacket.from_derived(d)
    assert wp.cm_width(0.0, cm) == hydrogen.dr_cm0
    assert wp.cm_width(cm.t_spr, cm) == pytest.approx(math.sqrt(2) * hydrogen.dr_cm0, rel=1e-15)
    assert wp.rel_width(d.t_spr_rel, d) == pytest.approx(math.sqrt(2) * d.dr_rel0, rel=1e-15)
    t = np.geomspace(1e-3, 1e3, 50) * d.t_spr_rel
    assert np.all(np.diff(wp.rel_width(t, d)) > 0)


def test_cm_density_is_normalised(hydrogen):
    cm = wp.CmPacket.from_derived(derive(hydrogen))
    x = np.linspace(-12, 12, 241)
    grid = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
    total = np.sum(wp.cm_density(grid, 0.0, cm)) * (x[1] - x[0]) ** 3
    assert total == pytest.approx(1.0, rel=1e-9)


def test_sharp_density_support_and_warning(hydrogen):
    d = derive(hydrogen)
    t = 5 / d.gamma
    r = np.array([0.5, 0.99, 1.01]) * d.v * t
    val = wp.rel_density_sharp(r, 0.0, t, d)
    assert val[0] > 0 and val[1] > val[0] and val[2] == 0
    with pytest.warns(wp.ValidityWarning):
        wp.rel_density_sharp(1.0, 0.0, 1.0 / d.gamma, d)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        wp.rel_density_sharp(1.0, 0.0, 3.0 / d.gamma, d)


def test_physical_density_uses_zeta_time_unit(hydrogen):
    d = derive(hydrogen)
    t = 2.0 * d.t_zeta
    r = d.v * t + np.array([-3.0, 0.0, 1.0]) * d.dr_rel0
    expected = 3 / (16 * math.pi * d.dr_rel0) / r**2 * wp.rel_density((r - d.v * t) / d.dr_rel0, 2.0)
    assert np.allclose(wp.rel_density_physical(r, 0.0, t, d), expected, rtol=1e-14)


def test_profile_rows():
    prof = wp.rel_profile(0.5, [-1.0, 0.0, 1.0])
    rows = list(prof.rows())
    assert [r[0] for r in rows] == [-1.0, 0.0, 1.0]
    assert all(r[1] == 0.5 for r in rows)
