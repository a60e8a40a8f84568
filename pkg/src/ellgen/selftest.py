"""Self-contained invariant suite: the `selftest` CLI command and endpoint.

Each check recomputes one of the package's mathematical invariants from
scratch (fixed random seeds, modest truncation orders) and reports pass/fail;
any failure indicates a broken build or a numerically hostile platform.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

from .coeffring import QSeries, RF_ONE, RF_S, RatFunc, rf
from .genera import (
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
from .lgside import (
    LGParams,
    check_correspondence,
    lg_ns_sum,
    lg_sigma1_sum,
    lg_sigma23_sum,
)
from .series import ZLaurent, residue_sum_closed, residue_sum_direct
from .theta import eta_value, theta_derivative, theta_over_eta3, theta_ratio_jet, theta_value


def _rand_ratfunc(rng):
    def poly():
        return RatFunc.from_coeffs([rng.randint(-9, 9) for _ in range(rng.randint(1, 5))])

    den = poly()
    while den.is_zero():
        den = poly()
    return poly() / den


def check_ratfunc_ring_axioms():
    rng = random.Random(101)
    for _ in range(25):
        a, b, c = (_rand_ratfunc(rng) for _ in range(3))
        if (a + b) + c != a + (b + c) or a * (b + c) != a * b + a * c or a * b != b * a:
            return False, "ring axiom violated"
        if not a.is_zero() and a * (1 / a) != RF_ONE:
            return False, "multiplicative inverse violated"
    return True, ""


def check_qseries_inverse_roundtrip():
    rng = random.Random(102)
    for _ in range(25):
        coeffs = {0: rf(rng.randint(1, 9))}
        for e in range(1, 9):
            c = rng.randint(-5, 5)
            if c:
                coeffs[e] = rf(c)
        a = QSeries(coeffs, 8)
        if a * a.inverse() != QSeries.one(8):
            return False, "u-series inverse roundtrip failed"
    return True, ""


def check_residue_of_derivatives():
    rng = random.Random(103)
    for _ in range(50):
        jet = {e: rng.randint(-9, 9) for e in range(-4, 5) if rng.random() < 0.7}
        f = ZLaurent.from_jet(jet or {0: 1}, 6, 0)
        if not f.derivative().residue().is_zero():
            return False, "residue of an exact derivative is nonzero"
    return True, ""


def check_residue_generating_identity():
    rng = random.Random(104)
    for _ in range(6):
        jet = {1: rng.choice([1, -1, 2])}
        for e in range(2, 8):
            c = rng.randint(-3, 3)
            if c:
                jet[e] = Fraction(c, rng.randint(1, 3))
        f = ZLaurent.from_jet(jet, 7, 2)
        ms = [rng.randint(1, 4) for _ in range(rng.randint(1, 3))]
        if residue_sum_direct(f, ms, 6) != residue_sum_closed(f, ms, 6):
            return False, f"direct/closed residue series disagree for ms={ms}"
    return True, ""


def check_theta_identities():
    rng = random.Random(105)
    tau = 0.21 + 1.07j
    q8 = cmath.exp(2j * cmath.pi * tau / 8)
    for _ in range(8):
        v = rng.uniform(-1.2, 1.2) + 1j * rng.uniform(-0.8, 0.8)
        t1 = theta_value("theta1", v, tau)
        if abs(t1 - theta_value("theta", 0.5 - v, tau)) > 1e-10 * max(1.0, abs(t1)):
            return False, "theta1 reflection identity failed"
        t2 = theta_value("theta2", v, tau)
        rhs = -1j * q8 * cmath.exp(-1j * cmath.pi * v) * theta_value("theta", tau / 2 - v, tau)
        if abs(t2 - rhs) > 1e-10 * max(1.0, abs(t2)):
            return False, "theta2 reflection identity failed"
        t3 = theta_value("theta3", v, tau)
        if abs(t3 - theta_value("theta2", v + 0.5, tau)) > 1e-10 * max(1.0, abs(t3)):
            return False, "theta3 shift identity failed"
    for tau0 in (1j, 0.3 + 1.1j, 2j):
        lhs = theta_derivative("theta", 0.0, tau0)
        rhs = 2 * cmath.pi * eta_value(tau0) ** 3
        if abs(lhs - rhs) > 1e-10 * abs(rhs):
            return False, "theta'(0) = 2 pi eta^3 failed"
    return True, ""


def check_kernel_normalization():
    f1 = theta_ratio_jet(5, 2).coeff_at(1)
    prod = (f1 * theta_over_eta3(5)).fold_prefactor()
    if prod != QSeries.one(10):
        return False, "f'(0) * G != 1"
    v, tau = 0.29, 1.25j
    val = theta_over_eta3(8).evaluate(v, tau)
    expect = theta_value("theta", v, tau) / (1j * eta_value(tau) ** 3)
    if abs(val - expect) > 1e-9 * abs(expect):
        return False, "G != theta/(i eta^3) numerically"
    return True, ""


def check_euler_numbers():
    for n in range(2, 9):
        for m in range(1, 6):
            spec = CISpec(n, [m])
            if euler_number(spec) != euler_number_alternating_sum(spec):
                return False, f"Euler mismatch at {spec.label()}"
    if euler_number(CISpec(5, [5])) != -200 or euler_number(CISpec(4, [4])) != 24:
        return False, "pinned Euler values wrong"
    return True, ""


def check_chi_y():
    for n, degs in ((4, [4]), (5, [5]), (6, [2, 3]), (5, [2, 2])):
        spec = CISpec(n, degs)
        coeffs = y_polynomial_coeffs(chi_y_genus(spec))
        if sum(coeffs) != euler_number(spec):
            return False, f"chi_y(1) != Euler at {spec.label()}"
        series = chi_y_generating_series(degs, n)
        if series.coeff_at(n - 1).constant_term() != chi_y_genus(spec):
            return False, f"chi_y generating series mismatch at {spec.label()}"
    return True, ""


def check_q0_slice():
    for n, degs in ((4, [4]), (5, [2, 2]), (6, [3]), (3, [2])):
        spec = CISpec(n, degs)
        g = elliptic_genus(spec, 1)
        if g.body.coeff(0) != chi_y_genus(spec) * RatFunc.s_power(-spec.dim):
            return False, f"q^0 slice mismatch at {spec.label()}"
    return True, ""


def check_elliptic_base_cases():
    for m in range(1, 5):
        g = elliptic_genus(CISpec(2, [m]), 4)
        if g.laurent != {0: [(0, Fraction(m))]}:
            return False, f"Y^2_{m} is not the constant {m}"
    if not elliptic_genus(CISpec(3, [3]), 4).is_zero():
        return False, "cubic curve genus not zero"
    series = elliptic_genus_generating_series([2], 4, 2)
    for n in range(2, 6):
        if series.coeff_at(n - 1) != elliptic_genus(CISpec(n, [2]), 2).body:
            return False, f"generating series mismatch at N={n}"
    return True, ""


def check_lg_correspondence():
    rep = check_correspondence(CISpec(5, [5]), LGParams(v=0.3, tau=1.5j, tol=1e-8), 10, "elliptic")
    if not rep.rel_diff < 1e-8:
        return False, f"quintic correspondence rel_diff={rep.rel_diff:.2e}"
    rep = check_correspondence(CISpec(5, [2, 3]), LGParams(v=0.23, tau=1.4j, tol=1e-7), 10, "elliptic")
    if not rep.rel_diff < 1e-7:
        return False, f"CI correspondence rel_diff={rep.rel_diff:.2e}"
    geo = ns_elliptic_genus(CISpec(4, [4]), 10).evaluate(0.3, 1.4j)
    lg = lg_ns_sum(4, 4, LGParams(v=0.3, tau=1.4j))
    if abs(geo - lg) > 1e-6 * abs(lg):
        return False, "NS correspondence failed"
    w = witten_genus(1, CISpec(6, [4]), 10, 1.2j)
    if abs(w.value - lg_sigma1_sum(6, 4, 1.2j)) > 1e-8 * max(1.0, abs(w.value)):
        return False, "sigma_1 correspondence failed"
    for k in (2, 3):
        w = witten_genus(k, CISpec(4, [4]), 8, 1.3j)
        if abs(w.value - lg_sigma23_sum(k, 4, 4, 1.3j)) > 1e-6 * max(1.0, abs(w.value)):
            return False, f"sigma_{k} correspondence failed"
    return True, ""


CHECKS = [
    ("ratfunc_ring_axioms", check_ratfunc_ring_axioms),
    ("qseries_inverse_roundtrip", check_qseries_inverse_roundtrip),
    ("residue_of_derivatives", check_residue_of_derivatives),
    ("residue_generating_identity", check_residue_generating_identity),
    ("theta_identities", check_theta_identities),
    ("kernel_normalization", check_kernel_normalization),
    ("euler_numbers", check_euler_numbers),
    ("chi_y_genus", check_chi_y),
    ("q0_slice", check_q0_slice),
    ("elliptic_base_cases", check_elliptic_base_cases),
    ("lg_correspondence", check_lg_correspondence),
]


def run_selftest() -> list:
    """Run every invariant check; returns [(name, passed, detail), ...]."""
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results
