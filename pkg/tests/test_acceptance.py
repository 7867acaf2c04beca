"""Exit criteria of the package, each checked at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` to get one pass/fail line per
criterion in the terminal summary.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from breakup import dynamics, entanglement, figures, oracle, wavepackets
from breakup.params import derive

pytestmark = pytest.mark.acceptance

MASS_RATIOS = (1e-4, 0.1, 0.2, 1.0)


def test_r_minimum_is_one(acceptance_report):
    worst = max(abs(entanglement.entanglement_r(entanglement.eta_star(r, 1.0), r, 1.0) - 1.0)
                for r in MASS_RATIOS)
    ok = acceptance_report(1, worst <= 1e-12, f"max |R(eta*) - 1| = {worst:.3e} (tol 1e-12)")
    assert ok


def test_duality(acceptance_report):
    eta = np.geomspace(1e-8, 1e8, 200)
    worst_abs, worst_rel = 0.0, 0.0
    for ratio in MASS_RATIOS:
        m1, m2 = ratio, 1.0
        total = m1 + m2
        mu = m1 * m2 / total
        r = entanglement.entanglement_r(eta, m1, m2)
        dual = entanglement.entanglement_r((mu / total) / eta, m1, m2)
        worst_abs = max(worst_abs, float(np.max(np.abs(dual - r))))
        worst_rel = max(worst_rel, float(np.max(np.abs(dual - r) / r)))
    ok = acceptance_report(2, worst_abs <= 1e-12,
                           f"max |R(eta') - R(eta)| = {worst_abs:.3e} (tol 1e-12), relative {worst_rel:.1e}")
    assert ok


def test_asymptotic_slopes_and_plateau(acceptance_report):
    m1, m2 = 1e-4, 1.0

    def slope(lo, hi):
        eta = np.geomspace(lo, hi, 101)
        return np.polyfit(np.log(eta), np.log(entanglement.entanglement_r(eta, m1, m2)), 1)[0]

    low, high = slope(1e-8, 1e-6), slope(1e2, 1e4)
    plateau = entanglement.entanglement_r(np.geomspace(1e-2, 1e-1, 101), m1, m2)
    ok = abs(low + 1) <= 0.01 and abs(high - 1) <= 0.01 and plateau.min() >= 1 and plateau.max() <= 1.01
    acceptance_report(3, ok, f"slopes {low:+.5f} / {high:+.5f}, plateau R in [{plateau.min():.6f}, "
                             f"{plateau.max():.6f}]")
    assert ok


def test_closed_profile_against_quadrature(acceptance_report):
    cases = oracle.profile_cases(tolerance=1e-5)
    worst = max(c.deviation for c in cases)
    ok = acceptance_report(4, all(c.passed for c in cases),
                           f"max deviation {worst:.2e} of peak over 5 zeta values (tol 1e-5)")
    assert ok


def test_regime_limits(acceptance_report):
    rho = np.linspace(-5.0, -0.5, 451)
    small = wavepackets.rel_density(rho, 0.01) / 4
    sharp_dev = float(np.max(np.abs(small - np.exp(rho)) / np.exp(rho)))
    zeta = 20.0
    rho_l = np.linspace(-1.5 * zeta, 1.5 * zeta, 601)
    lorentz = wavepackets.lorentzian_shape(rho_l, zeta)
    lorentz_dev = float(np.max(np.abs(wavepackets.rel_density(rho_l, zeta) - lorentz) / lorentz))
    ok = sharp_dev <= 0.02 and lorentz_dev <= 0.03
    acceptance_report(5, ok, f"zeta=0.01 vs e^rho: {sharp_dev:.1%} (tol 2%); "
                             f"zeta=20 vs Lorentzian: {lorentz_dev:.1%} (tol 3%)")
    assert ok


def test_gaussian_grid_widths(acceptance_report):
    cases = oracle.width_cases(tolerance=1e-4)
    worst = max(c.deviation for c in cases)
    ok = acceptance_report(6, all(c.passed for c in cases),
                           f"{len(cases)} widths, max relative deviation {worst:.2e} (tol 1e-4)")
    assert ok


def test_evolution_fixed_point_and_return(acceptance_report):
    m1, m2 = 1.0, 9.0  # m_e/M = 0.1
    star = entanglement.eta_star(m1, m2)
    fixed = dynamics.evolve(dynamics.params_for_eta0(star, m1, m2))
    fp_eta = float(np.max(np.abs(fixed.eta - star)))
    fp_r = float(np.max(np.abs(fixed.r_e - 1.0)))
    ok = fp_eta <= 1e-12 and fp_r <= 1e-12
    details = [f"fixed point |eta - eta*| {fp_eta:.1e}, |R - 1| {fp_r:.1e}"]
    for eta0 in (0.05, 0.5):
        params = dynamics.params_for_eta0(eta0, m1, m2)
        d = derive(params)
        trace = dynamics.evolve(params)
        t_end = 1e4 * max(d.t_spr_cm, d.t_spr_rel)
        steps = np.diff(trace.eta)
        monotone = bool(np.all(steps >= 0) or np.all(steps <= 0))
        eta_err = abs(trace.eta[-1] - d.eta_inf)
        r_err = abs(trace.r_e[-1] - trace.r_e[0]) / trace.r_e[0]
        ok &= monotone and eta_err <= 1e-3 and r_err <= 1e-3 and math.isclose(trace.times[-1], t_end)
        details.append(f"eta0={eta0}: monotone={monotone}, |eta-eta_inf| {eta_err:.1e}, dR/R {r_err:.1e}")
    acceptance_report(7, ok, "; ".join(details))
    assert ok


def test_photodissociation_symmetric_minimum(acceptance_report):
    star = entanglement.eta_star(1.0, 1.0)
    mol = figures.fig_profiles("fig8")[0]
    eta = np.array(mol.column("eta"))
    r = np.array(mol.column("r"))
    at_half = r[eta == 0.5]
    elsewhere = r[eta != 0.5]
    ok = star == 0.5 and at_half.size == 1 and at_half[0] == 1.0 and bool(np.all(elsewhere > 1.0))
    acceptance_report(8, ok, f"eta* = {star!r}, R(1/2) = {float(at_half[0])!r}, "
                             f"min R elsewhere - 1 = {elsewhere.min() - 1:.2e}")
    assert ok


def test_normalisation(acceptance_report):
    params = oracle.reference_params()
    d = derive(params)
    erf_dev = max(abs(oracle.profile_norm(z, params) - 1.0) for z in (0.01, 1.0, 20.0))
    sharp_dev = max(abs(oracle.sharp_norm(gt / d.gamma, d) - (1 - math.exp(-2 * gt))) for gt in (3.0, 10.0))
    ok = erf_dev <= 1e-4 and sharp_dev <= 1e-9
    acceptance_report(9, ok, f"profile |N - 1| {erf_dev:.2e} (tol 1e-4); sharp {sharp_dev:.2e} (tol 1e-9)")
    assert ok


def test_amplitude_unitarity(acceptance_report):
    params = oracle.reference_params()
    assert params.pole_ratio == pytest.approx(1e-4)
    g = params.gamma
    devs = [abs(oracle.unitarity(t, params) - 1.0) for t in (0.0, 1 / g, 10 / g)]
    ok = acceptance_report(10, max(devs) <= 1e-3,
                           "|total - 1| at t = 0, 1/gamma, 10/gamma: " + ", ".join(f"{v:.1e}" for v in devs))
    assert ok


def test_figure_runs_are_deterministic(acceptance_report, tmp_path):
    outputs = []
    for run in ("first", "second"):
        out = tmp_path / run
        subprocess.run([sys.executable, "-m", "breakup.cli", "figure", "all", "--out", str(out)], check=True)
        outputs.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))})
    ok = bool(outputs[0]) and outputs[0] == outputs[1]
    acceptance_report(11, ok, f"{len(outputs[0])} CSV files byte-identical across two runs")
    assert ok
