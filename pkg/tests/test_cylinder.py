import math

import numpy as np
import pytest
from scipy.integrate import quad

from hypspec import cylinder as cyl
from hypspec import specfun as sf

ELL_BOLZA = 2.0 * math.acosh(1.0 + math.sqrt(2.0))
LAM1 = 3.8388872588421995


def test_mode_index_validation():
    with pytest.raises(ValueError):
        cyl.ModeIndex(-1, "even")
    with pytest.raises(ValueError):
        cyl.ModeIndex(1, "flat")
    with pytest.raises(ValueError):
        cyl.ModeIndex(0, "even", "sin")


def test_constant_solution_k0_lambda0():
    sol = cyl.solve_radial(3.0, cyl.ModeIndex(0, "even"), 0.0, 2.0)
    v, d = sol.eval(np.array([0.0, 0.5, 1.9]))
    assert np.max(np.abs(v - 1.0)) < 1e-12
    assert np.max(np.abs(d)) < 1e-12


def test_gudermannian_solution_k0_lambda0_odd():
    # (cosh u')' = 0 with u'(0)=1 integrates to the Gudermannian
    sol = cyl.solve_radial(3.0, cyl.ModeIndex(0, "odd"), 0.0, 2.0)
    v, _ = sol.eval(1.0)
    oracle = quad(lambda u: 1.0 / math.cosh(u), 0.0, 1.0)[0]
    assert abs(oracle - 0.86576948323965862429) < 1e-12
    assert abs(v - oracle) < 1e-11


def hyp_closed_even(ell, k, lam, rho):
    s = 0.5 + 1j * math.sqrt(lam - 0.25)
    a = s / 2.0 + 1j * math.pi * k / ell
    b = (1 - s) / 2.0 + 1j * math.pi * k / ell
    z = -math.sinh(rho) ** 2
    f = sf.hyp2f1(a, b, 0.5, z).value
    pref = complex(math.cosh(rho)) ** (2j * math.pi * k / ell)
    return (pref * f).real


def hyp_closed_odd(ell, k, lam, rho):
    s = 0.5 + 1j * math.sqrt(lam - 0.25)
    a = (1 + s) / 2.0 + 1j * math.pi * k / ell
    b = (2 - s) / 2.0 + 1j * math.pi * k / ell
    z = -math.sinh(rho) ** 2
    f = sf.hyp2f1(a, b, 1.5, z).value
    pref = complex(math.cosh(rho)) ** (2j * math.pi * k / ell)
    return (math.sinh(rho) * pref * f).real


def test_even_solution_matches_hypergeometric_spot():
    sol = cyl.solve_radial(ELL_BOLZA, cyl.ModeIndex(1, "even"), LAM1, 2.0)
    v, _ = sol.eval(0.5)
    assert abs(v - hyp_closed_even(ELL_BOLZA, 1, LAM1, 0.5)) < 1e-9


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("lam", [1.0, 5.0, 20.0])
def test_hypergeometric_cross_check_grid(k, lam):
    fam_e = cyl.solve_radial_family(ELL_BOLZA, k, "even", lam, 1.6)
    fam_o = cyl.solve_radial_family(ELL_BOLZA, k, "odd", lam, 1.6)
    rhos = np.linspace(0.0, 1.5, 7)
    ve, _ = fam_e.eval(rhos)
    vo, _ = fam_o.eval(rhos)
    for rho, a, b in zip(rhos, ve[k], vo[k]):
        assert abs(a - hyp_closed_even(ELL_BOLZA, k, lam, rho)) < 1e-8
        assert abs(b - hyp_closed_odd(ELL_BOLZA, k, lam, rho)) < 1e-8


def test_wronskian_constancy():
    # absolute form where the evanescent growth e^{mu gd(rho)} stays
    # moderate; strong growth squares into the product and pushes any
    # double-precision Wronskian past 1e-9 (relative test below)
    for lam, n_max in ((1.0, 1), (3.84, 2), (20.0, 2), (200.0, 3)):
        fe = cyl.solve_radial_family(ELL_BOLZA, n_max, "even", lam, 1.6)
        fo = cyl.solve_radial_family(ELL_BOLZA, n_max, "odd", lam, 1.6)
        rhos = np.linspace(0.0, 1.55, 60)
        pe, dpe = fe.eval(rhos)
        po, dpo = fo.eval(rhos)
        w = np.cosh(rhos) * (pe * dpo - dpe * po)
        assert np.max(np.abs(w - 1.0)) < 1e-9


def test_wronskian_constancy_evanescent():
    # strongly evanescent modes grow like e^{mu rho}; the Wronskian
    # cancellation is then only meaningful relative to the product scale
    for lam, n_max in ((1.0, 10), (50.0, 24)):
        fe = cyl.solve_radial_family(ELL_BOLZA, n_max, "even", lam, 2.5)
        fo = cyl.solve_radial_family(ELL_BOLZA, n_max, "odd", lam, 2.5)
        rhos = np.linspace(0.0, 2.5, 60)
        pe, dpe = fe.eval(rhos)
        po, dpo = fo.eval(rhos)
        w = np.cosh(rhos) * (pe * dpo - dpe * po)
        scale = 1.0 + np.cosh(rhos) * (
            np.abs(pe * dpo) + np.abs(dpe * po)
        )
        assert np.max(np.abs(w - 1.0) / scale) < 1e-11


def test_ode_residual_finite_difference():
    lam, k, ell = 37.0, 2, 3.3
    sol = cyl.solve_radial(ell, cyl.ModeIndex(k, "even"), lam, 2.0)
    rng = np.random.default_rng(0)
    mu2 = (2.0 * math.pi * k / ell) ** 2
    h = 1e-5
    for rho in rng.uniform(0.05, 1.9, 100):
        vm, _ = sol.eval(rho - h)
        v0, d0 = sol.eval(rho)
        vp, _ = sol.eval(rho + h)
        ddphi = (vp - 2.0 * v0 + vm) / h**2
        resid = ddphi + math.tanh(rho) * d0 + (lam - mu2 / math.cosh(rho) ** 2) * v0
        assert abs(resid) < 1e-7 * (1.0 + abs(lam))


def test_parity():
    fe = cyl.solve_radial_family(3.0, 2, "even", 11.0, 2.0)
    fo = cyl.solve_radial_family(3.0, 2, "odd", 11.0, 2.0)
    rhos = np.array([0.3, 0.9, 1.7])
    vp, dp = fe.eval(rhos)
    vm, dm = fe.eval(-rhos)
    assert np.max(np.abs(vp - vm)) < 1e-12
    assert np.max(np.abs(dp + dm)) < 1e-12
    vp, dp = fo.eval(rhos)
    vm, dm = fo.eval(-rhos)
    assert np.max(np.abs(vp + vm)) < 1e-12
    assert np.max(np.abs(dp - dm)) < 1e-12


def test_initial_normalization():
    fe = cyl.solve_radial_family(2.2, 4, "even", 7.0, 1.5)
    fo = cyl.solve_radial_family(2.2, 4, "odd", 7.0, 1.5)
    ve, de = fe.eval(0.0)
    vo, do = fo.eval(0.0)
    assert np.max(np.abs(ve - 1.0)) < 1e-14
    assert np.max(np.abs(de)) < 1e-14
    assert np.max(np.abs(vo)) < 1e-14
    assert np.max(np.abs(do - 1.0)) < 1e-14


def test_eval_out_of_range():
    sol = cyl.solve_radial(3.0, cyl.ModeIndex(0, "even"), 1.0, 1.0)
    with pytest.raises(ValueError):
        sol.eval(1.5)


def test_mode_value_and_gradient():
    ell = 3.0
    fam = cyl.solve_radial_family(ell, 2, "even", 9.0, 1.5)
    sol = fam.single(2)
    # k = 0 has no angular dependence
    sol0 = fam.single(0)
    _, _, dt0 = cyl.mode_value_and_gradient(sol0, 0.4, 0.7)
    assert dt0 == 0.0
    # cos part vanishes at quarter period
    k = 2
    t_quarter = ell / (4.0 * k)
    v, _, dt = cyl.mode_value_and_gradient(sol, 0.4, t_quarter)
    assert abs(v) < 1e-12
    phi, _ = sol.eval(0.4)
    assert abs(abs(dt) - abs(phi) * 2.0 * math.pi * k / ell) < 1e-10


def test_gradient_matches_refined_solution():
    ell, k, lam = 3.0, 1, 9.0
    sol = cyl.solve_radial(ell, cyl.ModeIndex(k, "even"), lam, 1.5)
    fine = cyl.solve_radial(ell, cyl.ModeIndex(k, "even"), lam, 1.5, rtol=1e-14)
    v, d = sol.eval(0.3)
    vf, df = fine.eval(0.3)
    assert abs(v - vf) < 1e-10
    assert abs(d - df) < 1e-10


def test_directional_normal_derivative():
    ell, k, lam = 3.0, 1, 9.0
    sol = cyl.solve_radial(ell, cyl.ModeIndex(k, "even"), lam, 1.5)
    rho, t = 0.5, 0.3
    # pure rho-direction normal at the core of an even mode
    sol0 = cyl.solve_radial(ell, cyl.ModeIndex(0, "even"), lam, 1.5)
    assert abs(cyl.directional_normal_derivative(sol0, (0.0, 0.0), (1.0, 0.0))) < 1e-12
    # tangent to a level set gives zero derivative
    val, drho, dt = cyl.mode_value_and_gradient(sol, rho, t)
    grad_norm2 = drho**2 + dt**2 / math.cosh(rho) ** 2
    tang = (-dt / math.cosh(rho), drho / math.cosh(rho))  # metric-orthogonal
    n = math.sqrt(tang[0] ** 2 + math.cosh(rho) ** 2 * tang[1] ** 2)
    tang = (tang[0] / n, tang[1] / n)
    assert abs(cyl.directional_normal_derivative(sol, (rho, t), tang)) < 1e-9 * (
        1.0 + math.sqrt(grad_norm2)
    )
    # generic direction vs finite difference along a geodesic normal
    nrm = (0.6, 0.8 / math.cosh(rho))
    scale = math.sqrt(nrm[0] ** 2 + math.cosh(rho) ** 2 * nrm[1] ** 2)
    nrm = (nrm[0] / scale, nrm[1] / scale)
    nd = cyl.directional_normal_derivative(sol, (rho, t), nrm)
    h = 1e-6
    vp = cyl.mode_value_and_gradient(sol, rho + h * nrm[0], t + h * nrm[1])[0]
    vm = cyl.mode_value_and_gradient(sol, rho - h * nrm[0], t - h * nrm[1])[0]
    assert abs(nd - (vp - vm) / (2.0 * h)) < 1e-7
    with pytest.raises(ValueError):
        cyl.directional_normal_derivative(sol, (rho, t), (1.0, 1.0))
