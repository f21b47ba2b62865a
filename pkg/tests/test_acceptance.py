"""The eight acceptance criteria, one recorded line each (see the terminal summary).

Criteria 2 and 3 quote bound values the implementation does not reproduce;
those parts are marked xfail(strict=True) and recorded as FAIL, while the
reproducible parts are asserted separately.
"""
import math

import numpy as np
import pytest
from conftest import TORUS_EPS, Timer, direct_abg, random_inputs, ratio_grid_max, thm41_grid_max

from diracbounds.bounds import (
    COR43,
    THM42,
    BoundInputs,
    alpha_beta_gamma,
    best_bound,
    bound41,
    bound42,
    bound43,
    coefficients,
    cor43_constants,
    improvement_check,
    unified_lhs,
    vanishing_check,
)
from diracbounds.clifford import build_rep
from diracbounds.cli import parse_config, sweep_rows
from diracbounds.curvature import Einstein, ProductSpec, TorusRev, invariants
from diracbounds.identities import jet_checks, random_jets


def m4(r, rho):
    return ProductSpec("M4", [Einstein(2, 2.0 / r**2), TorusRev(rho)], kahler=True)


def m6(rho):
    return ProductSpec("M6", [Einstein(2, 2.0), Einstein(2, -2.0), TorusRev(rho)])


def m4_inputs(r, rho):
    return BoundInputs.from_invariants(invariants(m4(r, rho)), kahler=True)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# --- criterion 1 ---------------------------------------------------------

def test_criterion_1_example1_invariants(record_criterion):
    cases = [(1.0, 1.0), (1.0, 2.0), (0.7, 1.3), (2.0, 0.5)]
    worst = 0.0
    with Timer() as tm:
        for r, rho in cases:
            inv = invariants(m4(r, rho))
            expected = {
                "ric_sq_min": 2 / r**4,
                "r_min": 2 * (1 / r**2 - 1 / rho**2),
                "r_max": 2 * (1 / r**2 + 1 / (3 * rho**2)),
                "traceless_sq_max": (1 / r**2 + 1 / rho**2) ** 2,
                "kappa": -1 / rho**2,
                "epsilon": TORUS_EPS / rho**6,
            }
            for key, val in expected.items():
                got = getattr(inv, key)
                # r_min is exactly 0 at r = rho: compare on the scale of R_max
                worst = max(worst, abs(got - val) / max(abs(val), abs(inv.r_max) if key == "r_min" else 0.0))
            assert inv.tau == 0.0
    ok = worst <= 1e-9 and tm.elapsed < 1.0
    record_criterion(1, ok, f"max rel err {worst:.1e} over {len(cases)} (r, rho); tau = 0; {tm.elapsed:.2f}s")
    assert worst <= 1e-9
    assert tm.elapsed < 1.0


# --- criterion 2 ---------------------------------------------------------

def _criterion_2():
    with Timer() as tm:
        inp = m4_inputs(1.0, 1.0)
        t42, c43 = bound42(inp), bound43(inp)
        a, b, c = cor43_constants(inp)
    return inp, t42, c43, (a, b, c), tm.elapsed


def test_criterion_2_closed_form_parts():
    inp, t42, c43, (a, b, c), elapsed = _criterion_2()
    assert a == pytest.approx((3 + 2 * math.sqrt(3)) / 72, rel=1e-12)
    assert b == pytest.approx(14 / 9, rel=1e-12)
    assert c == pytest.approx(4 / 3, rel=1e-12)
    assert rel(c43.value, t42.value) <= 1e-9
    assert elapsed < 1.0


@pytest.mark.xfail(strict=True, reason="max of beta/alpha is 0.1142; the quoted 0.116 comes from sqrt(a^2+ab+c)")
def test_criterion_2_example1_bounds(record_criterion):
    inp, t42, c43, (a, b, c), elapsed = _criterion_2()
    abc_ok = (
        rel(a, (3 + 2 * math.sqrt(3)) / 72) <= 1e-12 and rel(b, 14 / 9) <= 1e-12 and rel(c, 4 / 3) <= 1e-12
    )
    agree = rel(c43.value, t42.value) <= 1e-9
    values_ok = abs(t42.value - 0.116) <= 5e-4 and abs(c43.value - 0.116) <= 5e-4
    ok = abc_ok and agree and values_ok and elapsed < 1.0
    record_criterion(
        2, ok,
        f"Thm42 = {t42.value:.5f}, Cor43 = {c43.value:.5f} (expected 0.116 +- 5e-4); "
        f"agree {rel(c43.value, t42.value):.0e}; a,b,c ok={abc_ok}; {elapsed:.2f}s",
    )
    assert ok


# --- criterion 3 ---------------------------------------------------------

def _criterion_3():
    pos = m4_inputs(1.0, math.sqrt(10) / 3)
    neg = m4_inputs(1.0, 3 / math.sqrt(10))
    return pos, best_bound(pos), neg, best_bound(neg)


def test_criterion_3_reproducible_parts():
    pos, rp, neg, rn = _criterion_3()
    assert rp.results["Friedrich"].value == pytest.approx(1 / 15, rel=1e-12)
    assert rp.results["Kaehler"].value == pytest.approx(0.1, rel=1e-12)
    assert rp.best.theorem == THM42
    assert rn.vanishing["curvature_kernel"].status == "holds"


@pytest.mark.xfail(strict=True, reason="direct maximization gives 0.1621 and 0.0640, not 0.156 and 0.061")
def test_criterion_3_example1_cases(record_criterion):
    pos, rp, neg, rn = _criterion_3()
    fr, ka, t42 = rp.results["Friedrich"].value, rp.results["Kaehler"].value, rp.results[THM42].value
    t42n = rn.results[THM42].value
    checks = {
        "Friedrich=1/15": rel(fr, 1 / 15) <= 1e-12,
        "Kaehler=0.1": rel(ka, 0.1) <= 1e-12,
        "Thm42=0.156": abs(t42 - 0.156) <= 5e-4,
        "best=Thm42": rp.best.theorem == THM42,
        "vanishing holds": rn.vanishing["curvature_kernel"].status == "holds",
        "Thm42=0.061": abs(t42n - 0.061) <= 5e-4,
    }
    failed = [k for k, v in checks.items() if not v]
    record_criterion(
        3, not failed,
        f"Thm42 = {t42:.4f} (rho=r*sqrt(10)/3), {t42n:.4f} (rho=3r/sqrt(10)); failed: {', '.join(failed) or 'none'}",
    )
    assert not failed


# --- criterion 4 ---------------------------------------------------------

def _reference_m6_polys(rho):
    alpha = (1.0, 12 / 5 + 28 / 15 * rho**-2, 24 / 5 + 8 / 5 * rho**-4)
    beta = (-3 / 5 * rho**-2, 12 / 5 - 6 / 5 * rho**-2 - 4 / 5 * rho**-4, -(3 + 2 * math.sqrt(3)) / 30 * rho**-6)
    return alpha, beta


def test_criterion_4_example2(record_criterion):
    coeff_err = 0.0
    for rho in (1.5, 2.0, 5.0):
        a, b, _ = coefficients(BoundInputs.from_invariants(invariants(m6(rho))))
        pa, pb = _reference_m6_polys(rho)
        coeff_err = max(coeff_err, *(abs(x - y) / max(1.0, abs(y)) for x, y in zip(a + b, pa + pb)))

    # threshold: analytic root of rho^4 - rho^2/2 = 1/3 + sqrt(6 + 4 sqrt 3)/12, then the verdict flips around it
    rhs = 1 / 3 + math.sqrt(6 + 4 * math.sqrt(3)) / 12
    rho0 = math.sqrt(0.25 + math.sqrt(0.0625 + rhs))
    below = vanishing_check(BoundInputs.from_invariants(invariants(m6(rho0 - 5e-5))))["curvature_kernel"].status
    above = vanishing_check(BoundInputs.from_invariants(invariants(m6(rho0 + 5e-5))))["curvature_kernel"].status
    threshold_ok = abs(rho0 - 1.04113) <= 5e-5 and below == "fails" and above == "holds"

    at2 = bound42(BoundInputs.from_invariants(invariants(m6(2.0)))).value
    far = bound42(BoundInputs.from_invariants(invariants(m6(1e6)))).value

    cfg = parse_config("manifold M6\nfactor einstein dim=2 scalar=2.0\nfactor einstein dim=2 scalar=-2.0\n"
                       "factor torus_rev rho=2.0\nsweep 3.rho 1.05 1000 1000\n")
    with Timer() as tm:
        rows = list(sweep_rows(cfg))
    col = np.array([float(r[8]) for r in rows])
    monotone = bool(np.all(np.diff(col) > 0))

    ok = (coeff_err <= 1e-10 and threshold_ok and abs(at2 - 0.2407) <= 5e-4 and monotone
          and abs(far - 0.354) <= 2e-3 and tm.elapsed < 10.0)
    record_criterion(
        4, ok,
        f"coeff err {coeff_err:.1e}; rho0 = {rho0:.6f} ({below}/{above}); bound(2) = {at2:.5f}; "
        f"monotone={monotone}; bound(1e6) = {far:.5f}; 1000-row sweep {tm.elapsed:.2f}s",
    )
    assert coeff_err <= 1e-10
    assert threshold_ok
    assert abs(at2 - 0.2407) <= 5e-4
    assert monotone
    assert abs(far - 0.354) <= 2e-3
    assert tm.elapsed < 10.0


# --- criterion 5 ---------------------------------------------------------

def test_criterion_5_identity_suite(record_criterion):
    worst = {}
    with Timer() as tm:
        for n in (4, 5, 6, 8):
            rng = np.random.default_rng(1000 + n)
            for res in jet_checks(build_rep(n), random_jets(n, 100, rng)):
                worst[res.name] = max(worst.get(res.name, 0.0), res.residual)
    expected = {"e_formula", "t_commutator", "t_theta", "trace_a", "a_skew_hermitian", "e_positive", "t_hermitian"}
    top = max(worst.values())
    ok = expected <= set(worst) and top < 1e-10 and tm.elapsed < 30.0
    record_criterion(5, ok, f"max residual {top:.1e} over {len(worst)} identities x 400 jets; {tm.elapsed:.2f}s")
    assert expected <= set(worst)
    assert top < 1e-10
    assert tm.elapsed < 30.0


# --- criterion 6 ---------------------------------------------------------

def test_criterion_6_optimizer_oracle(record_criterion):
    rng = np.random.default_rng(6)
    err42 = err41 = 0.0
    n41 = 0
    with Timer() as tm:
        for _ in range(200):
            inp = random_inputs(rng, tau_zero=True)
            grid, _ = ratio_grid_max(inp)
            res = bound42(inp)
            if res.applicable:
                err42 = max(err42, rel(res.value, grid))
            else:
                assert grid <= 1e-12
            inp41 = random_inputs(rng)
            oracle = thm41_grid_max(inp41)
            res41 = bound41(inp41)
            if oracle is None or oracle[0] <= 0:
                assert not res41.applicable
            else:
                n41 += 1
                err41 = max(err41, rel(math.sqrt(res41.value), oracle[0]))
    ok = err42 <= 1e-8 and err41 <= 1e-8 and tm.elapsed < 60.0
    record_criterion(6, ok, f"bound42 max rel err {err42:.1e} (200), bound41 {err41:.1e} ({n41} feasible); {tm.elapsed:.1f}s")
    assert err42 <= 1e-8
    assert err41 <= 1e-8
    assert tm.elapsed < 60.0


# --- criterion 7 ---------------------------------------------------------

def test_criterion_7_einstein_degeneration(record_criterion):
    details = []
    ok = True
    for n in range(3, 9):
        for r in (1.0, 0.5):
            inp = BoundInputs.from_invariants(invariants(ProductSpec(f"S{n}", [Einstein(n, n * (n - 1) / r**2)])))
            _, b, _ = coefficients(inp)
            res = bound42(inp)
            fried = n * inp.r_min / (4 * (n - 1))
            imp = improvement_check(inp)
            case_ok = (
                b[1] == 0.0 and b[2] == 0.0 and res.t_opt == 0.0
                and rel(res.value, fried) <= 1e-12 and rel(fried, n * n / (4 * r * r)) <= 1e-12
                and imp["constant_scalar"].status == "fails"
            )
            ok &= case_ok
            if not case_ok:
                details.append(f"S^{n}({r})")
    record_criterion(7, ok, "S^3..S^8: beta constant, t_opt = 0, Thm42 = Friedrich, equality reported as fails"
                     + (f"; broken: {details}" if details else ""))
    assert ok, details


# --- criterion 8 ---------------------------------------------------------

def _lhs_23(inp, t, lam):
    n = inp.n
    d = inp.r_max - inp.r_min
    return (
        lam**2 - n * inp.r_min / (4 * (n - 1))
        - 2 * t * (n / (4 * (n - 1)) * inp.ric_sq_min - inp.r_max / (n - 1) * lam**2
                   + n / (n - 1) * (inp.kappa - d / 4) * (lam**2 - inp.r_min / 4))
        + n / (n - 1) * t**2 * (inp.traceless_sq_max * lam**2 - inp.tau * lam + inp.epsilon)
    )


def _lhs_24(inp, t, lam):
    n = inp.n
    d = inp.r_max - inp.r_min
    return (
        lam**2 - n * inp.r_min / (4 * (n - 1))
        - 2 * t * (n / (4 * (n - 1)) * inp.ric_sq_min - inp.r_max / (n - 1) * lam**2
                   + n * inp.kappa / (n - 1) * (lam**2 - inp.r_max / 4)
                   - n * d / (4 * (n - 1)) * (lam**2 - inp.r_min / 4))
        + n / (n - 1) * t**2 * (inp.traceless_sq_max * lam**2 - inp.tau * lam + inp.epsilon)
    )


def test_criterion_8_unified_form(record_criterion):
    rng = np.random.default_rng(8)
    worst = {}
    for sign, lhs in ((-1, _lhs_23), (1, _lhs_24)):
        err = 0.0
        for _ in range(1000):
            inp = random_inputs(rng, kappa_sign=sign)
            t = float(rng.uniform(0.0, 5.0))
            lam = float(rng.uniform(0.0, 5.0))
            ours = unified_lhs(inp, t, lam)
            ref = lhs(inp, t, lam)
            a, b, g = alpha_beta_gamma(inp, t)
            scale = max(1.0, abs(a * lam**2), abs(b), abs(2 * g * lam))
            err = max(err, abs(ours - ref) / scale)
        worst["kappa<=0" if sign < 0 else "kappa>0"] = err
    ok = max(worst.values()) <= 1e-10
    record_criterion(8, ok, ", ".join(f"{k}: max err {v:.1e}" for k, v in worst.items()) + " (1000 points each)")
    assert ok


def test_direct_abg_matches_library():
    rng = np.random.default_rng(0)
    for _ in range(200):
        inp = random_inputs(rng)
        t = float(rng.uniform(0.0, 3.0))
        for x, y in zip(alpha_beta_gamma(inp, t), direct_abg(inp, t)):
            assert x == pytest.approx(y, rel=1e-12, abs=1e-12)
