"""Tests for the z-Laurent / t-series engine: products, inverses, residues, reversion."""

import random
from fractions import Fraction
from math import comb

import pytest

from ellgen.coeffring import QSeries, RatFunc, RF_S, rf
from ellgen.errors import CompositionError, NotInvertible, WindowError
from ellgen.series import TSeries, ZLaurent, compose, residue_sum_direct, residue_sum_closed, revert


def zl(jet, z_top, qorder=0):
    return ZLaurent.from_jet(jet, z_top, qorder)


def geometric_inverse_factor(z_top):
    """z/(1+z) = z - z^2 + z^3 - ... as an exact jet."""
    return zl({k: (-1) ** (k - 1) for k in range(1, z_top + 1)}, z_top)


def exp_jet(c, z_top, qorder=0):
    """e^(c*z) truncated at z_top, c rational."""
    out = {}
    term = Fraction(1)
    for k in range(z_top + 1):
        out[k] = term
        term = term * c / (k + 1)
    return zl(out, z_top, qorder)


class TestZLaurent:
    def test_mul_basic(self):
        a = zl({-1: 1, 0: 1}, 5)
        b = zl({0: -1, 1: 1}, 5)
        prod = a * b
        assert prod.coeff_at(-1).constant_term() == rf(-1)
        assert prod.coeff_at(0).is_zero()
        assert prod.coeff_at(1).constant_term() == rf(1)

    def test_mul_identity(self):
        a = zl({-2: 3, 0: 1, 3: -7}, 6)
        one = ZLaurent.constant(1, 1 << 30, 0)
        assert (a * one).coeffs == a.coeffs

    def test_mul_window_truncation(self):
        # (1+z)(1-z+z^2-z^3) with z_top 3: exact through z^3, tail cut
        a = zl({0: 1, 1: 1}, 3)
        b = zl({0: 1, 1: -1, 2: 1, 3: -1}, 3)
        prod = a * b
        assert prod.z_top == 3
        assert prod.coeff_at(0).constant_term() == rf(1)
        for k in (1, 2, 3):
            assert prod.coeff_at(k).is_zero()

    def test_inverse_shifted(self):
        a = zl({1: 1, 2: 1}, 6)  # z(1+z)
        inv = a.inverse()
        assert inv.min_exp == -1
        for k in range(-1, inv.z_top + 1):
            expect = (-1) ** (k + 1)
            assert inv.coeff_at(k).constant_term() == rf(expect)

    def test_inverse_constant(self):
        a = ZLaurent.constant(2, 4, 0)
        assert a.inverse().coeff_at(0).constant_term() == rf(Fraction(1, 2))

    def test_inverse_roundtrip(self):
        f = geometric_inverse_factor(6)
        prod = f * f.inverse()
        assert prod.coeff_at(0).constant_term() == rf(1)
        for k in range(1, prod.z_top + 1):
            assert prod.coeff_at(k).is_zero()

    def test_inverse_requires_unit(self):
        with pytest.raises(NotInvertible):
            zl({1: QSeries({1: rf(1)}, 2)}, 3, qorder=2).inverse()

    def test_scale_argument(self):
        assert zl({1: 1}, 3).scale_argument(5).coeff_at(1).constant_term() == rf(5)
        a = zl({1: 1, 2: 1}, 3).scale_argument(2)
        assert a.coeff_at(1).constant_term() == rf(2)
        assert a.coeff_at(2).constant_term() == rf(4)
        b = zl({-1: 7, 2: 3}, 4)
        assert b.scale_argument(1) is b

    def test_scale_argument_negative_exponent(self):
        a = zl({-2: 1}, 3).scale_argument(2)
        assert a.coeff_at(-2).constant_term() == rf(Fraction(1, 4))

    def test_residue_simple(self):
        assert zl({-1: 1}, 2).residue().constant_term() == rf(1)

    def test_residue_below_valuation_is_zero(self):
        assert zl({0: 1, 1: 4}, 3).residue().is_zero()

    def test_residue_window_error(self):
        bad = zl({-3: 1}, 0) * zl({-3: 1}, 0)
        assert bad.z_top < -1
        with pytest.raises(WindowError):
            bad.residue()

    def test_residue_euler_hypersurface(self):
        # m(1+z)^N / (z^(N-1) (1+mz)) at N=3, m=5: residue equals the
        # alternating binomial sum for the Euler number, here -10.
        m, big_n = 5, 3
        num = zl({k: m * comb(big_n, k) for k in range(big_n + 1)}, 6)
        den = zl({0: 1, 1: m}, 6) * zl({big_n - 1: 1}, 6)
        res = (num * den.inverse()).residue().constant_term().as_fraction()
        oracle = sum((-1) ** k * comb(big_n, k) * m ** (k - 1) for k in range(2, big_n + 1))
        assert res == oracle == -10

    def test_residue_quartic_numerator_instance(self):
        # 5(1+z)^4 / (z^2 (1+5z)): the 1/z coefficient is 5*(4-5) = -5
        num = zl({k: 5 * comb(4, k) for k in range(5)}, 6)
        den = zl({0: 1, 1: 5}, 6) * zl({1: 1}, 6) ** 2
        res = (num * den.inverse()).residue().constant_term().as_fraction()
        assert res == -5

    def test_residue_of_total_derivative(self):
        a = zl({-1: 1, 3: 1}, 5)
        assert a.derivative().residue().is_zero()

    def test_residue_of_random_derivatives(self):
        rng = random.Random(31415)
        for _ in range(100):
            jet = {}
            for e in range(-4, 5):
                c = rng.randint(-9, 9)
                if c:
                    jet[e] = c
            f = zl(jet, 6)
            assert f.derivative().residue().is_zero()


class TestReversion:
    def test_revert_geometric(self):
        # f = z/(1+z)  ->  g = t/(1-t) = t + t^2 + ...
        g = revert(geometric_inverse_factor(8), 8)
        for k in range(1, 9):
            assert g.coeff_at(k).constant_term() == rf(1)

    def test_revert_identity(self):
        g = revert(zl({1: 1}, 5), 5)
        assert g == TSeries.from_jet({1: 1}, 5, 0)

    def test_revert_chi_y_kernel(self):
        # f = (1-e^-z)/(1-y e^-z): inverse function is -log((1-t)/(1-yt)),
        # whose t^k coefficient is (1-y^k)/k.
        z_top = 6
        y = RF_S * RF_S
        num = (ZLaurent.constant(1, z_top, 0) - exp_jet(-1, z_top))
        den = (ZLaurent.constant(1, z_top, 0) - exp_jet(-1, z_top) * y)
        f = num * den.inverse()
        g = revert(f, 6)
        for k in range(1, 7):
            expect = (1 - y**k) * rf(Fraction(1, k))
            assert g.coeff_at(k).constant_term() == expect

    def test_revert_requires_valuation_one(self):
        with pytest.raises(NotInvertible):
            revert(zl({0: 1, 1: 1}, 4), 4)

    def test_revert_window_guard(self):
        with pytest.raises(WindowError):
            revert(zl({1: 1, 2: 1}, 3), 5)

    def test_compose_square(self):
        f = zl({2: 1}, 4)
        g = TSeries.from_jet({1: 1, 2: 1}, 4, 0)
        h = compose(f, g)
        assert h == TSeries.from_jet({2: 1, 3: 2, 4: 1}, 4, 0)

    def test_compose_linear_reinterprets(self):
        f = zl({0: 7, 1: 3}, 4)
        h = compose(f, TSeries.from_jet({1: 1}, 4, 0))
        assert h == TSeries.from_jet({0: 7, 1: 3}, 4, 0)

    def test_compose_rejects_constant_term(self):
        with pytest.raises(CompositionError):
            compose(zl({1: 1}, 3), TSeries.from_jet({0: 1, 1: 1}, 3, 0))

    def test_compose_revert_roundtrip(self):
        rng = random.Random(2718)
        for _ in range(20):
            jet = {1: rng.choice([1, -1, 2, 3, Fraction(1, 2)])}
            for e in range(2, 7):
                c = rng.randint(-4, 4)
                if c:
                    jet[e] = c
            f = zl(jet, 6, qorder=4)
            g = revert(f, 6)
            t = compose(f, g)
            assert t == TSeries.from_jet({1: 1}, 6, 4)


class TestResidueGeneratingSeries:
    def test_lhs_identity_for_plain_z(self):
        # f = z, ms=[1]: only n=1 survives and the series is exactly t
        f = zl({1: 1}, 8)
        assert residue_sum_direct(f, [1], 6) == TSeries.from_jet({1: 1}, 6, 0)

    def test_rhs_linear(self):
        f = zl({1: 1}, 8)
        for m in (1, 2, 5):
            assert residue_sum_closed(f, [m], 6) == TSeries.from_jet({1: m}, 6, 0)

    def test_euler_generating_function(self):
        # f = z/(1+z): closed form must be m t / ((1-t)^2 (1+(m-1)t))
        t_order = 8
        f = geometric_inverse_factor(t_order + 1)
        for m in range(1, 6):
            got = residue_sum_closed(f, [m], t_order)
            one = TSeries.constant(1, t_order, 0)
            t = TSeries.from_jet({1: 1}, t_order, 0)
            expect = (
                (t * m)
                * ((one - t) ** 2).inverse()
                * (one + t * (m - 1)).inverse()
            )
            assert got == expect

    def test_direct_equals_closed_for_scaled_geometric(self):
        f = geometric_inverse_factor(9)
        for ms in ([2], [3], [2, 3]):
            assert residue_sum_direct(f, ms, 8) == residue_sum_closed(f, ms, 8)

    def test_direct_equals_closed_random(self):
        rng = random.Random(555)
        for _ in range(10):
            jet = {1: rng.choice([1, -1, 2, Fraction(1, 3)])}
            for e in range(2, 8):
                c = rng.randint(-3, 3)
                if c:
                    jet[e] = Fraction(c, rng.randint(1, 3))
            f = zl(jet, 7, qorder=2)
            ms = [rng.randint(1, 4) for _ in range(rng.randint(1, 3))]
            assert residue_sum_direct(f, ms, 6) == residue_sum_closed(f, ms, 6)

    def test_small_n_closed_forms(self):
        # residues of f(mz)/f(z)^(n+1) for n = 1, 2, 3 against the jet formulas
        rng = random.Random(8)
        for _ in range(20):
            a = Fraction(rng.choice([1, -1, 2, 3, -2]), rng.randint(1, 3))
            b = Fraction(rng.choice([1, -1, 2, -3]), rng.randint(1, 3))
            c = Fraction(rng.choice([1, -1, 2, 4]), rng.randint(1, 3))
            f = zl({1: a, 2: b, 3: c, 4: Fraction(1, 7)}, 8)
            fp0, fpp0, fppp0 = a, 2 * b, 6 * c
            for m in range(1, 6):
                inv = f.inverse()
                scaled = f.scale_argument(m)
                res = {
                    n: (scaled * inv ** (n + 1)).residue().constant_term().as_fraction()
                    for n in (1, 2, 3)
                }
                assert res[1] == Fraction(m) / fp0
                assert res[2] == Fraction(m * (m - 3), 2) * fpp0 / fp0**3
                assert res[3] == (
                    Fraction(m**3 - 4 * m, 6) * fppp0 / fp0**4
                    - Fraction(2 * m**2 - 5 * m, 2) * fpp0**2 / fp0**5
                )
