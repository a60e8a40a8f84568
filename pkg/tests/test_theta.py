"""Tests for theta jets and numeric theta/eta evaluation."""

import cmath
import math
import random
from fractions import Fraction

import pytest

from ellgen.coeffring import PF_TRIVIAL, Prefactor, QSeries, RF_S, RatFunc, rf
from ellgen.errors import DomainError
from ellgen.series import ZLaurent
from ellgen.theta import (
    NS_KERNEL_PREFACTOR,
    EvalPoint,
    ThetaKind,
    eta_value,
    ns_theta_ratio_jet,
    theta2_over_eta3,
    theta_derivative,
    theta_over_eta3,
    theta_ratio_jet,
    theta_value,
)

ALL_KINDS = [ThetaKind.THETA, ThetaKind.THETA1, ThetaKind.THETA2, ThetaKind.THETA3]


def rand_point(rng, tau):
    v = rng.uniform(-1.5, 1.5) + 1j * rng.uniform(-1.0, 1.0) * tau.imag
    return v


class TestThetaNumeric:
    def test_lattice_zeros(self):
        tau = 0.2 + 1.0j
        for a in (0, 1):
            for b in (0, 1):
                assert abs(theta_value("theta", a + b * tau, tau)) < 1e-12
                assert abs(theta_value("theta1", a + b * tau + 0.5, tau)) < 1e-12
                assert abs(theta_value("theta2", a + b * tau + tau / 2, tau)) < 1e-12
                assert abs(theta_value("theta3", a + b * tau + (1 + tau) / 2, tau)) < 1e-12

    def test_theta3_is_shifted_theta2(self):
        rng = random.Random(11)
        tau = 0.1 + 0.9j
        for _ in range(5):
            v = rand_point(rng, tau)
            lhs = theta_value("theta3", v, tau)
            rhs = theta_value("theta2", v + 0.5, tau)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_parity(self):
        rng = random.Random(12)
        tau = 1.1j
        for _ in range(5):
            v = rand_point(rng, tau)
            assert abs(theta_value("theta", -v, tau) + theta_value("theta", v, tau)) < 1e-11 * max(
                1.0, abs(theta_value("theta", v, tau))
            )
            for kind in ("theta1", "theta2", "theta3"):
                a, b = theta_value(kind, -v, tau), theta_value(kind, v, tau)
                assert abs(a - b) < 1e-11 * max(1.0, abs(b))

    def test_quasi_periodicity_table(self):
        rng = random.Random(13)
        tau = 0.3 + 1.2j
        q = cmath.exp(2j * cmath.pi * tau)
        signs_one = {"theta": -1, "theta1": -1, "theta2": 1, "theta3": 1}
        signs_tau = {"theta": -1, "theta1": 1, "theta2": -1, "theta3": 1}
        for _ in range(20):
            v = rand_point(rng, tau)
            for kind in signs_one:
                base = theta_value(kind, v, tau)
                shift1 = theta_value(kind, v + 1, tau)
                assert abs(shift1 - signs_one[kind] * base) < 1e-11 * max(1.0, abs(base))
                shift_tau = theta_value(kind, v + tau, tau)
                mult = signs_tau[kind] * q ** Fraction(-1, 2) * cmath.exp(-2j * cmath.pi * v)
                assert abs(shift_tau - mult * base) < 1e-11 * max(1.0, abs(mult * base))

    def test_reflection_identities(self):
        # theta1(v) = theta(1/2 - v); theta2, theta3 variants with q^(1/8) factors
        rng = random.Random(14)
        tau = 0.15 + 1.05j
        q8 = cmath.exp(2j * cmath.pi * tau / 8)
        for _ in range(10):
            v = rand_point(rng, tau)
            t1 = theta_value("theta1", v, tau)
            assert abs(t1 - theta_value("theta", 0.5 - v, tau)) < 1e-11 * max(1.0, abs(t1))
            t2 = theta_value("theta2", v, tau)
            rhs2 = -1j * q8 * cmath.exp(-1j * cmath.pi * v) * theta_value(
                "theta", tau / 2 - v, tau
            )
            assert abs(t2 - rhs2) < 1e-11 * max(1.0, abs(t2))
            t3 = theta_value("theta3", v, tau)
            rhs3 = q8 * cmath.exp(-1j * cmath.pi * v) * theta_value(
                "theta", 0.5 + tau / 2 - v, tau
            )
            assert abs(t3 - rhs3) < 1e-11 * max(1.0, abs(t3))

    def test_derivative_at_zero_is_eta_cubed(self):
        for tau in (1j, 0.3 + 1.1j, 2j):
            lhs = theta_derivative("theta", 0.0, tau)
            rhs = 2 * cmath.pi * eta_value(tau) ** 3
            assert abs(lhs - rhs) < 1e-10 * abs(rhs)

    def test_derivative_quasi_periodicity(self):
        tau = 1.2j
        a, b = 1, 1
        q = cmath.exp(2j * cmath.pi * tau)
        lhs = theta_derivative("theta", a + b * tau, tau)
        rhs = (-1) ** (a + b) * q ** Fraction(-1, 2) * theta_derivative("theta", 0.0, tau)
        assert abs(lhs - rhs) < 1e-9 * abs(rhs)

    def test_derivative_central_difference(self):
        rng = random.Random(15)
        tau = 0.2 + 1.3j
        h = 1e-5
        for kind in ALL_KINDS:
            v = rand_point(rng, tau)
            numeric = (theta_value(kind, v + h, tau) - theta_value(kind, v - h, tau)) / (2 * h)
            exact = theta_derivative(kind, v, tau)
            assert abs(numeric - exact) < 1e-6 * max(1.0, abs(exact))

    def test_reduction_matches_raw_product_far_from_axis(self):
        # argument reduction must agree with the raw product where both are stable
        tau = 0.07 + 0.8j
        v = 0.31 + 0.2j
        direct = theta_value("theta", v, tau)
        shifted = theta_value("theta", v + 3 + 2 * tau, tau)
        q = cmath.exp(2j * cmath.pi * tau)
        mult = (-1) ** (3 + 2) * q ** (-2) * cmath.exp(-2j * cmath.pi * 2 * v)
        assert abs(shifted - mult * direct) < 1e-10 * abs(mult * direct)

    def test_eta_gamma_closed_form(self):
        expect = math.gamma(0.25) / (2 * math.pi ** 0.75)
        assert abs(eta_value(1j) - expect) < 1e-12

    def test_eta_translation(self):
        tau = 1.3j
        lhs = eta_value(tau + 1)
        rhs = cmath.exp(1j * cmath.pi / 12) * eta_value(tau)
        assert abs(lhs - rhs) < 1e-12 * abs(rhs)

    def test_eta_damping(self):
        assert abs(eta_value(5j)) < abs(eta_value(1j))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            theta_value("theta", 0.1, -1j)
        with pytest.raises(DomainError):
            eta_value(0.5)
        with pytest.raises(DomainError):
            EvalPoint(0.1, 0.3)


class TestKernelJets:
    def test_q0_part_matches_rational_kernel(self):
        # at q = 0 the kernel is s (1 - e^-z)/(1 - y e^-z)
        f = theta_ratio_jet(2, 6)
        y = RF_S * RF_S

        def exp_jet(c, z_top, u_order):
            jet, term = {}, Fraction(1)
            for k in range(z_top + 1):
                jet[k] = QSeries.const(term, u_order)
                term = term * c / (k + 1)
            return ZLaurent(jet, z_top, u_order)

        num = (ZLaurent.constant(1, 6, 0) - exp_jet(-1, 6, 0)) * RF_S
        den = ZLaurent.constant(1, 6, 0) - exp_jet(-1, 6, 0) * y
        expect = num * den.inverse()
        for e in range(1, 7):
            assert f.coeff_at(e).coeff(0) == expect.coeff_at(e).coeff(0)

    def test_linear_coefficient_at_q0(self):
        f = theta_ratio_jet(3, 3)
        lead = f.coeff_at(1).coeff(0)
        assert lead == RF_S / (1 - RF_S * RF_S)

    def test_fprime_zero_times_g_is_one(self):
        q_order = 6
        f = theta_ratio_jet(q_order, 2)
        prod = (f.coeff_at(1) * theta_over_eta3(q_order)).fold_prefactor()
        assert prod == QSeries.one(2 * q_order)

    def test_fprime_numeric_consistency(self):
        # z^1 coefficient of the kernel equals (i/2pi) theta'(0)/theta(v)
        v, tau = 0.23, 1.2j
        val = theta_ratio_jet(8, 2).coeff_at(1).evaluate(v, tau)
        expect = (1j / (2 * cmath.pi)) * theta_derivative("theta", 0, tau) / theta_value(
            "theta", v, tau
        )
        assert abs(val - expect) < 1e-9 * abs(expect)

    def test_ns_q0_part(self):
        # u^0 part of the NS kernel body is e^(z/2)(1 - e^-z) = 2 sinh(z/2)
        f = ns_theta_ratio_jet(2, 5)
        half = Fraction(1, 2)
        expect = {}
        term_p, term_m = Fraction(1), Fraction(1)
        for k in range(6):
            expect[k] = term_p - term_m
            term_p = term_p * half / (k + 1)
            term_m = term_m * (-half) / (k + 1)
        for e in range(6):
            got = f.coeff_at(e).coeff(0)
            assert got == rf(expect[e])

    def test_ns_fprime_times_gns_body_is_one(self):
        q_order = 4
        f = ns_theta_ratio_jet(q_order, 2)
        body = theta2_over_eta3(q_order).with_prefactor(PF_TRIVIAL)
        assert f.coeff_at(1) * body == QSeries.one(2 * q_order)

    def test_ns_antisymmetry(self):
        # body(-z, 1/s) = -body(z, s), coefficientwise
        f = ns_theta_ratio_jet(2, 4)
        for e in range(f.min_exp, 5):
            qs = f.coeff_at(e)
            for ue in range(qs.order + 1):
                c = qs.coeff(ue)
                mirrored = c.subs_s_inverse() * ((-1) ** e)
                assert mirrored == -c

    def test_ns_prefactor_constant(self):
        assert NS_KERNEL_PREFACTOR == Prefactor(1, 1, 0)

    def test_g_series_leading_terms(self):
        g = theta_over_eta3(3)
        assert g.prefactor == Prefactor(0, 0, -1)
        assert g.coeff(0) == 1 - RF_S * RF_S

    def test_g_q1_coefficient_against_kernel_inverse(self):
        # G = 1/f'(0): compare the full series, not just one coefficient
        q_order = 5
        g = theta_over_eta3(q_order).fold_prefactor()
        finv = theta_ratio_jet(q_order, 2).coeff_at(1).inverse().with_prefactor(PF_TRIVIAL)
        assert g == finv

    def test_g_numeric_vs_theta_over_eta(self):
        v, tau = 0.31, 1.3j
        val = theta_over_eta3(8).evaluate(v, tau)
        expect = theta_value("theta", v, tau) / (1j * eta_value(tau) ** 3)
        assert abs(val - expect) < 1e-10 * abs(expect)

    def test_gns_body_leading_terms(self):
        g = theta2_over_eta3(4)
        assert g.prefactor == Prefactor(3, -1, 0)
        assert g.coeff(0) == rf(1)
        y = RF_S * RF_S
        expect = -(y + RatFunc.s_power(-2))
        assert g.coeff(1) == expect

    def test_gns_numeric_identity(self):
        # theta(-v + tau/2) / theta2'(tau/2) = (i/2pi) y^(1/2) G_NS
        v, tau = 0.2, 1.1j
        lhs = theta_value("theta", -v + tau / 2, tau) / theta_derivative("theta2", tau / 2, tau)
        y_half = cmath.exp(1j * cmath.pi * v)
        rhs = (1j / (2 * cmath.pi)) * y_half * theta2_over_eta3(8).evaluate(v, tau)
        assert abs(lhs - rhs) < 1e-9 * abs(rhs)

    def test_lattice_shift_identity_for_g(self):
        # theta(-v + a + b tau)/theta'(a + b tau) = e^(2 pi i b v)/(2 pi i) G
        v, tau = 0.17, 1.15j
        gval = theta_over_eta3(8).evaluate(v, tau)
        for a in range(3):
            for b in range(3):
                lhs = theta_value("theta", -v + a + b * tau, tau) / theta_derivative(
                    "theta", a + b * tau, tau
                )
                rhs = cmath.exp(2j * cmath.pi * b * v) / (2j * cmath.pi) * gval
                assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))

    def test_disk_cache_transparent(self, tmp_path, monkeypatch):
        # results served from ELLGEN_CACHE_DIR must be bit-identical
        import ellgen.theta as mod

        fresh = mod.theta_ratio_jet(2, 4)
        monkeypatch.setenv("ELLGEN_CACHE_DIR", str(tmp_path))
        mod.theta_ratio_jet.cache_clear()
        first = mod.theta_ratio_jet(2, 4)  # computes, writes the cache file
        assert list(tmp_path.iterdir())
        mod.theta_ratio_jet.cache_clear()
        second = mod.theta_ratio_jet(2, 4)  # loaded from disk
        assert first == fresh == second
        mod.theta_ratio_jet.cache_clear()

    def test_lattice_shift_identity_for_gns(self):
        # theta(-v+a+b tau+tau/2)/theta2'(a+b tau+tau/2) = (-1)^a i y^(b+1/2)/(2pi) G_NS
        v, tau = 0.13, 1.2j
        gval = theta2_over_eta3(8).evaluate(v, tau)
        y = cmath.exp(2j * cmath.pi * v)
        for a in range(3):
            for b in range(3):
                pole = a + b * tau + tau / 2
                lhs = theta_value("theta", -v + pole, tau) / theta_derivative("theta2", pole, tau)
                rhs = (-1) ** a * 1j * y ** (b + 0.5) / (2 * cmath.pi) * gval
                assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))
