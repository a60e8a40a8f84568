"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one `ACCEPT <n> <name>: PASS` line (visible with -s or in
captured output on failure); tolerances are pinned here, not configurable.
Run with `python -m pytest tests/test_acceptance.py -v`.
"""

import cmath
import math
import random
import time
from fractions import Fraction

import pytest

from ellgen.coeffring import QSeries, RF_S, RatFunc, rf
from ellgen.genera import (
    CISpec,
    chi_y_generating_series,
    chi_y_genus,
    elliptic_genus,
    elliptic_genus_generating_series,
    euler_number,
    euler_number_alternating_sum,
    ns_elliptic_genus,
    witten_genus,
    y_polynomial_coeffs,
)
from ellgen.lgside import (
    LGParams,
    check_correspondence,
    lg_ns_sum,
    lg_sigma1_sum,
    lg_sigma23_sum,
)
from ellgen.series import ZLaurent, residue_sum_closed, residue_sum_direct
from ellgen.theta import (
    eta_value,
    theta2_over_eta3,
    theta_derivative,
    theta_over_eta3,
    theta_value,
)


def _report(num, name):
    print(f"ACCEPT {num} {name}: PASS")


def test_accept_1_euler_numbers():
    t0 = time.time()
    assert euler_number(CISpec(5, [5])) == -200
    assert euler_number(CISpec(4, [4])) == 24
    for n in range(2, 11):
        for m in range(1, 7):
            spec = CISpec(n, [m])
            assert euler_number(spec) == euler_number_alternating_sum(spec)
    assert time.time() - t0 < 1.0
    _report(1, "euler numbers, exact, vs alternating-sum oracle")


def test_accept_2_chi_y_closed_forms():
    t0 = time.time()
    y = RF_S * RF_S
    for m in range(1, 7):
        assert chi_y_genus(CISpec(3, [m])) == (1 + y) * rf(Fraction(3 * m - m * m, 2))
    assert y_polynomial_coeffs(chi_y_genus(CISpec(4, [4]))) == [2, 20, 2]
    # y = 1 equals the Euler number for all N <= 9, r <= 2, degrees <= 5
    for n in range(2, 10):
        for m1 in range(1, 6):
            spec = CISpec(n, [m1])
            assert sum(y_polynomial_coeffs(chi_y_genus(spec))) == euler_number(spec)
        if n >= 3:
            for m1 in range(1, 6):
                for m2 in range(m1, 6):
                    spec = CISpec(n, [m1, m2])
                    assert sum(y_polynomial_coeffs(chi_y_genus(spec))) == euler_number(spec)
    assert time.time() - t0 < 5.0
    _report(2, "chi_y closed forms and chi_y(1) = Euler sweep")


def test_accept_3_elliptic_base_cases():
    t0 = time.time()
    for m in range(1, 6):
        g = elliptic_genus(CISpec(2, [m]), 8)
        assert g.laurent == {0: [(0, Fraction(m))]}
    assert elliptic_genus(CISpec(3, [3]), 8).is_zero()
    assert time.time() - t0 < 10.0
    _report(3, "elliptic genus base cases (points and the cubic curve)")


def test_accept_4_q0_slice():
    for n in range(2, 8):
        for degs in [[m] for m in range(1, 6)] + [
            [m1, m2] for m1 in range(1, 5) for m2 in range(m1, 5)
        ]:
            if n < len(degs) + 1:
                continue
            spec = CISpec(n, degs)
            g = elliptic_genus(spec, 0)
            assert g.body.coeff(0) == chi_y_genus(spec) * RatFunc.s_power(-spec.dim)
    _report(4, "q^0 slice equals s^(-d) * chi_y for all N <= 7, r <= 2")


def test_accept_5_generating_function_oracle():
    q_order = 4
    for degs in ([2], [3], [2, 3]):
        series = elliptic_genus_generating_series(degs, 5, q_order)
        for n in range(len(degs) + 1, 7):
            direct = elliptic_genus(CISpec(n, degs), q_order)
            assert series.coeff_at(n - 1) == direct.body
    _report(5, "t^(N-1) generating-series coefficients equal direct residues")


def test_accept_6_residue_lemmas():
    # direct residue sums equal the closed reversion form, exactly
    rng = random.Random(20240808)
    for _ in range(10):
        jet = {1: rng.choice([1, -1, 2, Fraction(1, 2)])}
        for e in range(2, 8):
            c = rng.randint(-3, 3)
            if c:
                jet[e] = Fraction(c, rng.randint(1, 3))
        f = ZLaurent.from_jet(jet, 7, 2)
        ms = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        assert residue_sum_direct(f, ms, 6) == residue_sum_closed(f, ms, 6)
    # small-n closed forms for the residues of f(mz)/f(z)^(n+1)
    for _ in range(20):
        a = Fraction(rng.choice([1, -1, 2, 3]), rng.randint(1, 3))
        b = Fraction(rng.choice([1, -1, 2, -3]), rng.randint(1, 3))
        c = Fraction(rng.choice([1, -1, 4]), rng.randint(1, 3))
        f = ZLaurent.from_jet({1: a, 2: b, 3: c}, 8, 0)
        fp, fpp, fppp = a, 2 * b, 6 * c
        inv = f.inverse()
        for m in range(1, 6):
            scaled = f.scale_argument(m)
            res = {
                n: (scaled * inv ** (n + 1)).residue().constant_term().as_fraction()
                for n in (1, 2, 3)
            }
            assert res[1] == Fraction(m) / fp
            assert res[2] == Fraction(m * (m - 3), 2) * fpp / fp**3
            assert res[3] == (
                Fraction(m**3 - 4 * m, 6) * fppp / fp**4
                - Fraction(2 * m**2 - 5 * m, 2) * fpp**2 / fp**5
            )
    _report(6, "residue generating identity and small-n closed forms, exact")


def test_accept_7_theta_identities():
    for tau in (1j, 0.3 + 1.1j, 2j):
        lhs = theta_derivative("theta", 0.0, tau)
        rhs = 2 * cmath.pi * eta_value(tau) ** 3
        assert abs(lhs - rhs) < 1e-10 * abs(rhs)
    rng = random.Random(7)
    tau = 0.17 + 1.21j
    q = cmath.exp(2j * cmath.pi * tau)
    q8 = cmath.exp(2j * cmath.pi * tau / 8)
    signs_one = {"theta": -1, "theta1": -1, "theta2": 1, "theta3": 1}
    signs_tau = {"theta": -1, "theta1": 1, "theta2": -1, "theta3": 1}
    for _ in range(10):
        v = rng.uniform(-1.2, 1.2) + 1j * rng.uniform(-0.9, 0.9)
        for kind in signs_one:
            base = theta_value(kind, v, tau)
            assert abs(theta_value(kind, v + 1, tau) - signs_one[kind] * base) < 1e-11 * max(
                1.0, abs(base)
            )
            mult = signs_tau[kind] * q ** Fraction(-1, 2) * cmath.exp(-2j * cmath.pi * v)
            assert abs(theta_value(kind, v + tau, tau) - mult * base) < 1e-11 * max(
                1.0, abs(mult * base)
            )
        t1 = theta_value("theta1", v, tau)
        assert abs(t1 - theta_value("theta", 0.5 - v, tau)) < 1e-11 * max(1.0, abs(t1))
        t2 = theta_value("theta2", v, tau)
        rhs2 = -1j * q8 * cmath.exp(-1j * cmath.pi * v) * theta_value("theta", tau / 2 - v, tau)
        assert abs(t2 - rhs2) < 1e-11 * max(1.0, abs(t2))
        t3 = theta_value("theta3", v, tau)
        rhs3 = q8 * cmath.exp(-1j * cmath.pi * v) * theta_value("theta", 0.5 + tau / 2 - v, tau)
        assert abs(t3 - rhs3) < 1e-11 * max(1.0, abs(t3))
    # normalizing-series identities at 5 points each
    for i in range(5):
        v = 0.11 + 0.06 * i
        tau0 = 1.05j + 0.08j * i + 0.03 * i
        gval = theta_over_eta3(8).evaluate(v, tau0)
        expect = theta_value("theta", v, tau0) / (1j * eta_value(tau0) ** 3)
        assert abs(gval - expect) < 1e-9 * abs(expect)
        lhs = theta_value("theta", -v + tau0 / 2, tau0) / theta_derivative(
            "theta2", tau0 / 2, tau0
        )
        y_half = cmath.exp(1j * cmath.pi * v)
        rhs = (1j / (2 * cmath.pi)) * y_half * theta2_over_eta3(8).evaluate(v, tau0)
        assert abs(lhs - rhs) < 1e-9 * abs(rhs)
    _report(7, "theta'(0) = 2 pi eta^3, quasi-periodicity, reflections, G and G_NS")


def test_accept_8_cy_lg_correspondence():
    t0 = time.time()
    rep = check_correspondence(
        CISpec(5, [5]), LGParams(v=0.3, tau=1.5j, tol=1e-8), 16, "elliptic"
    )
    assert rep.rel_diff < 1e-8
    rep0 = check_correspondence(
        CISpec(3, [3]), LGParams(v=0.27, tau=1.5j, tol=1e-9), 16, "elliptic"
    )
    assert abs(rep0.geometric_value) < 1e-9 and abs(rep0.lg_value) < 1e-9
    rep_ci = check_correspondence(
        CISpec(5, [2, 3]), LGParams(v=0.23, tau=1.5j, tol=1e-7), 16, "elliptic"
    )
    assert rep_ci.rel_diff < 1e-7
    assert time.time() - t0 < 30.0
    _report(8, "CY/LG correspondence: quintic, cubic curve, CI(2,3)")


def test_accept_9_witten_correspondences():
    w = witten_genus(1, CISpec(6, [4]), 16, 1.2j)
    lg = lg_sigma1_sum(6, 4, 1.2j)
    assert abs(w.value - lg) / max(abs(w.value), abs(lg)) < 1e-8
    params = LGParams(v=0.3, tau=1.4j)
    geo = ns_elliptic_genus(CISpec(4, [4]), 12).evaluate(params.v, params.tau)
    lgv = lg_ns_sum(4, 4, params)
    assert abs(geo - lgv) / max(abs(geo), abs(lgv)) < 1e-6
    for k in (2, 3):
        wk = witten_genus(k, CISpec(4, [4]), 12, 1.3j)
        lgk = lg_sigma23_sum(k, 4, 4, 1.3j)
        assert abs(wk.value - lgk) / max(abs(wk.value), abs(lgk)) < 1e-6
    _report(9, "sigma_1 / NS / sigma_2 / sigma_3 correspondences")


def test_accept_10_certification_and_integrality():
    smooth = [(4, [4]), (5, [5]), (6, [2, 2]), (5, [2, 3]), (3, [3]), (2, [3])]
    for n, degs in smooth:
        spec = CISpec(n, degs)
        g = elliptic_genus(spec, 4)
        assert g.certificate
        zero_slice = g.laurent.get(0, [])
        if zero_slice:
            assert zero_slice[0][0] >= -spec.dim and zero_slice[-1][0] <= spec.dim
        for pairs in g.laurent.values():
            for _, c in pairs:
                assert c.denominator == 1
    _report(10, "Laurent certificates, u^0 exponent window, integrality")
