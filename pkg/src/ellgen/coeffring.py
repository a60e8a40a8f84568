"""Exact arithmetic for the coefficient field Q(s) and truncated series over it.

Conventions used throughout the package:

* ``s`` stands for the square root of the Jacobi variable ``y`` (``s**2 = y``),
  numerically ``s = exp(pi*i*v)``;
* ``u`` stands for the square root of the nome ``q`` (``u**2 = q``),
  numerically ``u = exp(pi*i*tau)``.

`RatFunc` is an exact rational function in ``s`` with arbitrary-precision
rational coefficients, kept in canonical form (numerator and denominator
coprime, denominator primitive with positive leading coefficient; the monic
normalization is exposed through :meth:`RatFunc.num` / :meth:`RatFunc.den`).

`QSeries` is a truncated power series in ``u`` with `RatFunc` coefficients and
a tracked `Prefactor` (powers of sqrt(-1), q^(1/8) and s) so that half-integer
normalizations never contaminate the exact series body.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

from .errors import DomainError, EvalError, NotInvertible, PrefactorError

BigRat = Fraction

# ---------------------------------------------------------------------------
# integer polynomial kernels (coefficient tuples, constant term first)
# ---------------------------------------------------------------------------

_SCHOOLBOOK_LIMIT = 1200


def _pstrip(c) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _padd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _pstrip(out)


def _pneg(a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in a)


def _pscale(a: tuple[int, ...], k: int) -> tuple[int, ...]:
    if k == 0:
        return ()
    if k == 1:
        return a
    return tuple(x * k for x in a)


def _pack(c: tuple[int, ...], bits: int) -> int:
    acc = 0
    for x in reversed(c):
        acc = (acc << bits) + x
    return acc


def _unpack(p: int, bits: int, n: int) -> list[int]:
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = []
    for _ in range(n):
        r = p & mask
        if r >= half:
            r -= mask + 1
        out.append(r)
        p = (p - r) >> bits
    return out


def _pmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    la, lb = len(a), len(b)
    if la * lb <= _SCHOOLBOOK_LIMIT:
        out = [0] * (la + lb - 1)
        if la > lb:
            a, b, la, lb = b, a, lb, la
        for i, ai in enumerate(a):
            if ai:
                seg = out[i : i + lb]
                out[i : i + lb] = [x + ai * y for x, y in zip(seg, b)]
        return _pstrip(out)
    # Kronecker substitution: one big-integer product, balanced-digit decode.
    bound = max(abs(x) for x in a) * max(abs(x) for x in b) * min(la, lb)
    bits = bound.bit_length() + 2
    prod = _pack(a, bits) * _pack(b, bits)
    return _pstrip(_unpack(prod, bits, la + lb - 1))


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _pcontent(a: tuple[int, ...]) -> int:
    g = 0
    for x in a:
        if x:
            g = _int_gcd(g, abs(x))
            if g == 1:
                return 1
    return g or 1


def _pprimitive(a: tuple[int, ...]) -> tuple[int, ...]:
    if not a:
        return ()
    g = _pcontent(a)
    if a[-1] < 0:
        g = -g
    if g != 1:
        a = tuple(x // g for x in a)
    return a


def _pdiv_exact_monic(a: tuple[int, ...], g: tuple[int, ...]):
    """Divide a by a monic integer g; return the quotient or None if inexact."""
    if not a:
        return ()
    dg = len(g) - 1
    if len(a) - 1 < dg:
        return None
    rem = list(a)
    quot = [0] * (len(a) - dg)
    for i in range(len(a) - 1, dg - 1, -1):
        c = rem[i]
        if c:
            quot[i - dg] = c
            for j in range(dg + 1):
                rem[i - dg + j] -= c * g[j]
    if any(rem[:dg]):
        return None
    return tuple(quot)


def _pdiv_exact(a: tuple[int, ...], g: tuple[int, ...]):
    """Exact division allowing a rational scale: returns (q, e) with a*e == q*g.

    Raises DomainError if g does not divide a over Q.
    """
    lead = g[-1]
    if lead == 1:
        q = _pdiv_exact_monic(a, g)
        if q is None:
            raise DomainError("inexact polynomial division")
        return q, 1
    k = len(a) - len(g) + 1
    rem = [x * lead**k for x in a]
    dq = len(a) - len(g)
    quot = [0] * (dq + 1)
    for i in range(len(rem) - 1, len(g) - 2, -1):
        c = rem[i]
        if c:
            if c % lead:
                raise DomainError("inexact polynomial division")
            f = c // lead
            quot[i - (len(g) - 1)] = f
            for j, gv in enumerate(g):
                rem[i - (len(g) - 1) + j] -= f * gv
    if any(rem[: len(g) - 1]):
        raise DomainError("inexact polynomial division")
    return _pstrip(quot), lead**k


def _ppseudo_rem(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    db = len(b) - 1
    lead = b[-1]
    rem = list(a)
    for i in range(len(a) - 1, db - 1, -1):
        c = rem[i]
        if c:
            rem = [lead * x for x in rem]
            c = rem[i]
            f = c // lead  # exact: rem[i] was just scaled by lead
            for j in range(db + 1):
                rem[i - db + j] -= f * b[j]
        rem[i] = 0
    return _pstrip(rem[:db])


def _pgcd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Primitive gcd of integer polynomials via the Euclidean remainder sequence."""
    a, b = _pprimitive(a), _pprimitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return (1,)
        r = _pprimitive(_ppseudo_rem(a, b))
        a, b = b, r
    return a if a else ()


def _peval(c: tuple[int, ...], x: complex) -> complex:
    acc = 0j
    for v in reversed(c):
        acc = acc * x + v
    return acc


# s, s-1 and s+1 are the only denominator factors the genus pipelines ever
# produce; a factored hint keeps their cancellation Euclid-free.
_FACTOR_SM1 = (-1, 1)
_FACTOR_SP1 = (1, 1)


@lru_cache(maxsize=None)
def _hint_poly(a: int, b: int, c: int) -> tuple[int, ...]:
    out = (1,)
    for _ in range(b):
        out = _pmul(out, _FACTOR_SM1)
    for _ in range(c):
        out = _pmul(out, _FACTOR_SP1)
    if a:
        out = (0,) * a + out
    return out


def _detect_hint(dc: tuple[int, ...]):
    """Return (a, b, c) with dc == s^a (s-1)^b (s+1)^c, or None."""
    a = 0
    while len(dc) > 1 and dc[0] == 0:
        dc = dc[1:]
        a += 1
    b = 0
    while len(dc) > 1:
        q = _pdiv_exact_monic(dc, _FACTOR_SM1)
        if q is None:
            break
        dc = q
        b += 1
    c = 0
    while len(dc) > 1:
        q = _pdiv_exact_monic(dc, _FACTOR_SP1)
        if q is None:
            break
        dc = q
        c += 1
    if dc == (1,):
        return (a, b, c)
    return None


def _cancel_hinted(nc, hint):
    """Strip s/(s-1)/(s+1) factors from nc, bounded by hint; return (nc', hint')."""
    a, b, c = hint
    while a and nc and nc[0] == 0:
        nc = nc[1:]
        a -= 1
    while b and nc:
        q = _pdiv_exact_monic(nc, _FACTOR_SM1)
        if q is None:
            break
        nc = q
        b -= 1
    while c and nc:
        q = _pdiv_exact_monic(nc, _FACTOR_SP1)
        if q is None:
            break
        nc = q
        c -= 1
    return nc, (a, b, c)


class RatFunc:
    """A rational function in s over Q, always in canonical reduced form.

    Internal representation: value = nc / (nd * dc) where nc is an integer
    coefficient tuple, nd a positive integer and dc a primitive integer
    denominator polynomial with positive leading coefficient.
    """

    __slots__ = ("nc", "nd", "dc", "hint")

    def __init__(self, nc, nd, dc, hint):
        self.nc = nc
        self.nd = nd
        self.dc = dc
        self.hint = hint

    # -- construction --------------------------------------------------------

    @staticmethod
    def _make(nc: tuple[int, ...], nd: int, dc: tuple[int, ...], hint) -> "RatFunc":
        """Finalize a pair already known to be coprime; normalizes contents."""
        if not nc:
            return RF_ZERO
        if nd < 0:
            nc, nd = _pneg(nc), -nd
        g = _int_gcd(_pcontent(nc), nd)
        if g != 1:
            nc = tuple(x // g for x in nc)
            nd //= g
        return RatFunc(nc, nd, dc, hint)

    @staticmethod
    def _reduce(nc: tuple[int, ...], nd: int, dc: tuple[int, ...], hint) -> "RatFunc":
        """Build canonical form from an un-cancelled numerator/denominator pair."""
        if not dc:
            raise DomainError("division by zero rational function")
        if not nc:
            return RF_ZERO
        cont = _pcontent(dc)
        if dc[-1] < 0:
            cont = -cont
        if cont != 1:
            dc = tuple(x // cont for x in dc)
            nd *= abs(cont)
            if cont < 0:
                nc = _pneg(nc)
        if dc == (1,):
            return RatFunc._make(nc, nd, dc, (0, 0, 0))
        if hint is None:
            hint = _detect_hint(dc)
        if hint is not None:
            nc, hint = _cancel_hinted(nc, hint)
            dc = _hint_poly(*hint)
            if dc == (1,):
                hint = (0, 0, 0)
            return RatFunc._make(nc, nd, dc, hint)
        g = _pgcd(nc, dc)
        if len(g) > 1:
            nc, e_n = _pdiv_exact(nc, g)
            dc, e_d = _pdiv_exact(dc, g)
            nd *= e_n
            nc = _pscale(nc, e_d)
            return RatFunc._reduce(nc, nd, dc, None)
        return RatFunc._make(nc, nd, dc, None)

    @classmethod
    def from_fraction(cls, value) -> "RatFunc":
        f = Fraction(value)
        if f == 0:
            return RF_ZERO
        return cls((f.numerator,), f.denominator, (1,), (0, 0, 0))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "RatFunc":
        """Polynomial in s from an iterable of rationals (constant term first)."""
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // _int_gcd(den, f.denominator)
        nc = _pstrip([int(f * den) for f in fracs])
        return cls._make(nc, den, (1,), (0, 0, 0))

    @classmethod
    def s_power(cls, k: int) -> "RatFunc":
        """The Laurent monomial s**k (k may be negative)."""
        if k >= 0:
            return cls(((0,) * k) + (1,), 1, (1,), (0, 0, 0))
        return cls((1,), 1, ((0,) * (-k)) + (1,), (-k, 0, 0))

    # -- predicates & views ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.nc

    def is_one(self) -> bool:
        return self.nc == (1,) and self.nd == 1 and self.dc == (1,)

    def is_constant(self) -> bool:
        return len(self.nc) <= 1 and self.dc == (1,)

    def as_fraction(self) -> Fraction:
        if not self.nc:
            return Fraction(0)
        if not self.is_constant():
            raise DomainError("rational function is not a constant")
        return Fraction(self.nc[0], self.nd)

    @property
    def num(self) -> tuple[Fraction, ...]:
        """Numerator coefficients under the monic-denominator normalization."""
        lead = self.dc[-1]
        return tuple(Fraction(c, self.nd * lead) for c in self.nc)

    @property
    def den(self) -> tuple[Fraction, ...]:
        """Monic denominator coefficients."""
        lead = self.dc[-1]
        return tuple(Fraction(c, lead) for c in self.dc)

    def laurent_pairs(self):
        """[(exponent, Fraction)] when this is a Laurent polynomial in s, else None."""
        hint = self.hint
        if hint is None or hint[1] or hint[2]:
            return None
        shift = hint[0]
        return [(i - shift, Fraction(c, self.nd)) for i, c in enumerate(self.nc) if c]

    def subs_s_inverse(self) -> "RatFunc":
        """The substitution s -> 1/s."""
        if not self.nc:
            return RF_ZERO
        dn, dd = len(self.nc) - 1, len(self.dc) - 1
        out = RatFunc._reduce(
            _pstrip(tuple(reversed(self.nc))), self.nd, _pstrip(tuple(reversed(self.dc))), None
        )
        k = dd - dn
        return out * RatFunc.s_power(k) if k else out

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.nc:
            return other
        if not other.nc:
            return self
        if self.dc == (1,) and other.dc == (1,):
            nd = self.nd * other.nd // _int_gcd(self.nd, other.nd)
            nc = _padd(_pscale(self.nc, nd // self.nd), _pscale(other.nc, nd // other.nd))
            return RatFunc._make(nc, nd, (1,), (0, 0, 0))
        if self.dc == other.dc:
            nd = self.nd * other.nd // _int_gcd(self.nd, other.nd)
            nc = _padd(_pscale(self.nc, nd // self.nd), _pscale(other.nc, nd // other.nd))
            return RatFunc._reduce(nc, nd, self.dc, self.hint)
        if self.hint is not None and other.hint is not None:
            ha, hb = self.hint, other.hint
            hl = tuple(max(x, y) for x, y in zip(ha, hb))
            ma = _hint_poly(*(l - x for l, x in zip(hl, ha)))
            mb = _hint_poly(*(l - x for l, x in zip(hl, hb)))
            lcm = _hint_poly(*hl)
            nd = self.nd * other.nd // _int_gcd(self.nd, other.nd)
            nc = _padd(
                _pscale(_pmul(self.nc, ma), nd // self.nd),
                _pscale(_pmul(other.nc, mb), nd // other.nd),
            )
            return RatFunc._reduce(nc, nd, lcm, hl)
        # general slow path: combine over the full product denominator
        nc = _padd(
            _pscale(_pmul(self.nc, other.dc), other.nd),
            _pscale(_pmul(other.nc, self.dc), self.nd),
        )
        return RatFunc._reduce(nc, self.nd * other.nd, _pmul(self.dc, other.dc), None)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        if not self.nc:
            return self
        return RatFunc(_pneg(self.nc), self.nd, self.dc, self.hint)

    def __sub__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.nc or not other.nc:
            return RF_ZERO
        nd = self.nd * other.nd
        if self.dc == (1,) and other.dc == (1,):
            return RatFunc._make(_pmul(self.nc, other.nc), nd, (1,), (0, 0, 0))
        if self.hint is not None and other.hint is not None:
            # cross-cancel against the factored denominators, then multiply;
            # the result is canonical by construction
            na, ha = _cancel_hinted(self.nc, other.hint)
            nb, hb = _cancel_hinted(other.nc, self.hint)
            hint = tuple(x + y for x, y in zip(ha, hb))
            dc = _hint_poly(*hint)
            return RatFunc._make(_pmul(na, nb), nd, dc, hint)
        return RatFunc._reduce(_pmul(self.nc, other.nc), nd, _pmul(self.dc, other.dc), None)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.nc:
            raise DomainError("division by zero rational function")
        dc = self.nc
        cont = _pcontent(dc)
        if dc[-1] < 0:
            cont = -cont
        if cont != 1:
            dc = tuple(x // cont for x in dc)
        nc = _pscale(self.dc, self.nd)
        nd = abs(cont)
        if cont < 0:
            nc = _pneg(nc)
        return RatFunc._make(nc, nd, dc, _detect_hint(dc))

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = RF_ONE, self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.nc == other.nc and self.nd == other.nd and self.dc == other.dc

    def __hash__(self):
        return hash((self.nc, self.nd, self.dc))

    # -- evaluation --------------------------------------------------------------

    def evaluate(self, s_val: complex) -> complex:
        den = _peval(self.dc, s_val)
        if abs(den) < 1e-300:
            raise EvalError(f"pole of rational function at s={s_val!r} (|den|={abs(den):.2e})")
        return _peval(self.nc, s_val) / (self.nd * den)

    def __repr__(self):
        def side(c, d):
            terms = []
            for i, v in enumerate(c):
                if not v:
                    continue
                f = Fraction(v, d)
                if i == 0:
                    terms.append(str(f))
                else:
                    mon = "s" if i == 1 else f"s^{i}"
                    terms.append(mon if f == 1 else f"{f}*{mon}")
            return " + ".join(terms) if terms else "0"

        if self.dc == (1,):
            return side(self.nc, self.nd)
        return f"({side(self.nc, self.nd)})/({side(self.dc, 1)})"


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFunc.from_fraction(x)
    return NotImplemented


RF_ZERO = RatFunc((), 1, (1,), (0, 0, 0))
RF_ONE = RatFunc((1,), 1, (1,), (0, 0, 0))
RF_S = RatFunc((0, 1), 1, (1,), (0, 0, 0))


def rf(value) -> RatFunc:
    """Convenience constructor: int / Fraction / RatFunc -> RatFunc."""
    out = _coerce(value)
    if out is NotImplemented:
        raise TypeError(f"cannot build a RatFunc from {type(value)!r}")
    return out


# ---------------------------------------------------------------------------
# prefactors
# ---------------------------------------------------------------------------


class Prefactor(NamedTuple):
    """Tracked normalization (sqrt(-1))^i_pow * q^(q8_pow/8) * s^s_pow."""

    i_pow: int = 0
    q8_pow: int = 0
    s_pow: int = 0

    @staticmethod
    def make(i_pow=0, q8_pow=0, s_pow=0) -> "Prefactor":
        return Prefactor(i_pow % 4, q8_pow, s_pow)

    def combine(self, other: "Prefactor") -> "Prefactor":
        return Prefactor(
            (self.i_pow + other.i_pow) % 4,
            self.q8_pow + other.q8_pow,
            self.s_pow + other.s_pow,
        )

    def inverse(self) -> "Prefactor":
        return Prefactor((-self.i_pow) % 4, -self.q8_pow, -self.s_pow)

    def power(self, k: int) -> "Prefactor":
        return Prefactor((self.i_pow * k) % 4, self.q8_pow * k, self.s_pow * k)

    def is_trivial(self) -> bool:
        return self == (0, 0, 0)

    def numeric(self, v: complex, tau: complex) -> complex:
        return (
            (1j) ** self.i_pow
            * cmath.exp(2j * cmath.pi * tau * self.q8_pow / 8)
            * cmath.exp(1j * cmath.pi * v * self.s_pow)
        )


PF_TRIVIAL = Prefactor(0, 0, 0)


# ---------------------------------------------------------------------------
# truncated series in u
# ---------------------------------------------------------------------------


class QSeries:
    """Truncated power series in u = q^(1/2) with RatFunc coefficients.

    Coefficients with exponent > ``order`` are unknown (not zero).  Arithmetic
    between two series narrows to the smaller order.  Addition requires equal
    prefactors; multiplication combines them componentwise.
    """

    __slots__ = ("coeffs", "order", "prefactor")

    def __init__(self, coeffs: Mapping[int, RatFunc], order: int, prefactor: Prefactor = PF_TRIVIAL):
        if order < 0:
            raise DomainError("negative truncation order")
        self.coeffs = {e: c for e, c in coeffs.items() if e <= order and not c.is_zero()}
        self.order = order
        self.prefactor = prefactor

    # -- constructors ------------------------------------------------------------

    @classmethod
    def const(cls, value, order: int, prefactor: Prefactor = PF_TRIVIAL) -> "QSeries":
        return cls({0: rf(value)}, order, prefactor)

    @classmethod
    def u_power(cls, k: int, order: int, coeff=1) -> "QSeries":
        return cls({k: rf(coeff)}, order)

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls({}, order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls({0: RF_ONE}, order)

    # -- views --------------------------------------------------------------------

    def coeff(self, e: int) -> RatFunc:
        return self.coeffs.get(e, RF_ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> RatFunc:
        return self.coeffs.get(0, RF_ZERO)

    def items(self):
        return sorted(self.coeffs.items())

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.coeffs == other.coeffs
            and self.order == other.order
            and self.prefactor == other.prefactor
        )

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items())), self.order, self.prefactor))

    # -- arithmetic ------------------------------------------------------------------

    def __add__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, RatFunc)):
            other = QSeries.const(other, self.order, self.prefactor)
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.prefactor != other.prefactor:
            raise PrefactorError(
                f"cannot add series with prefactors {self.prefactor} and {other.prefactor}"
            )
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            cur = out.get(e)
            out[e] = c if cur is None else cur + c
        return QSeries(out, order, self.prefactor)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self.coeffs.items()}, self.order, self.prefactor)

    def __sub__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, RatFunc)):
            other = QSeries.const(other, self.order, self.prefactor)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, RatFunc)):
            c = rf(other)
            if c.is_zero():
                return QSeries({}, self.order, self.prefactor)
            return QSeries({e: v * c for e, v in self.coeffs.items()}, self.order, self.prefactor)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order, other.order)
        pf = self.prefactor.combine(other.prefactor)
        if not self.coeffs or not other.coeffs:
            return QSeries({}, order, pf)
        acc: dict[int, RatFunc] = {}
        small, big = self.coeffs, other.coeffs
        if len(small) > len(big):
            small, big = big, small
        for e1, c1 in small.items():
            if e1 > order:
                continue
            for e2, c2 in big.items():
                e = e1 + e2
                if e > order:
                    continue
                p = c1 * c2
                cur = acc.get(e)
                acc[e] = p if cur is None else cur + p
        return QSeries(acc, order, pf)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        a0 = self.coeffs.get(0)
        if a0 is None or a0.is_zero():
            raise NotInvertible("series has zero constant term")
        inv0 = a0.inverse()
        out = {0: inv0}
        for k in range(1, self.order + 1):
            acc = RF_ZERO
            for j, aj in self.coeffs.items():
                if 1 <= j <= k:
                    b = out.get(k - j)
                    if b is not None:
                        acc = acc + aj * b
            if not acc.is_zero():
                out[k] = -(inv0 * acc)
        return QSeries(out, self.order, self.prefactor.inverse())

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = QSeries.one(self.order), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def truncate(self, order: int) -> "QSeries":
        if order >= self.order:
            return self
        return QSeries(self.coeffs, order, self.prefactor)

    def with_prefactor(self, prefactor: Prefactor) -> "QSeries":
        return QSeries(self.coeffs, self.order, prefactor)

    def fold_prefactor(self) -> "QSeries":
        """Push the prefactor into the body (requires q8_pow = 0 mod 4, i_pow even)."""
        pf = self.prefactor
        if pf.is_trivial():
            return self
        if pf.q8_pow % 4 != 0:
            raise PrefactorError(f"q^(1/8) power {pf.q8_pow} is not a whole power of u")
        if pf.i_pow % 2 != 0:
            raise PrefactorError("cannot fold an odd power of sqrt(-1) into Q(s)")
        shift = pf.q8_pow // 4
        sfac = RatFunc.s_power(pf.s_pow) * (-1 if pf.i_pow == 2 else 1)
        coeffs = {}
        for e, c in self.coeffs.items():
            e2 = e + shift
            if e2 < 0:
                raise PrefactorError("prefactor folding would create negative u powers")
            coeffs[e2] = c * sfac
        return QSeries(coeffs, self.order + shift, PF_TRIVIAL)

    # -- numerics -----------------------------------------------------------------------

    def evaluate(self, v: complex, tau: complex) -> complex:
        if complex(tau).imag <= 0:
            raise DomainError("tau must lie in the upper half-plane")
        s_val = cmath.exp(1j * cmath.pi * v)
        u_val = cmath.exp(1j * cmath.pi * tau)
        total = 0j
        for e, c in sorted(self.coeffs.items()):
            total += c.evaluate(s_val) * u_val**e
        return total * self.prefactor.numeric(v, tau)

    def __repr__(self):
        parts = [f"({c!r})*u^{e}" for e, c in sorted(self.coeffs.items())]
        body = " + ".join(parts) if parts else "0"
        pf = "" if self.prefactor.is_trivial() else f" pref={tuple(self.prefactor)}"
        return f"QSeries({body} + O(u^{self.order + 1}){pf})"
