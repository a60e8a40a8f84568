"""Truncated Laurent series in z over QSeries coefficients, and t-power series.

`ZLaurent` is the home of residue integrands: finitely many z-exponents
(possibly negative), each carrying an exact `QSeries`.  Every operation tracks
the largest z-exponent that is still fully correct (``z_top``), so residue
extraction can refuse silently-truncated answers.  Exponents below the stored
minimum are exactly zero, not unknown: the unreliable region only ever sits
above ``z_top``.

`TSeries` holds generating functions in an auxiliary variable t, used to
cross-check residue pipelines against their closed inverse-function forms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .coeffring import PF_TRIVIAL, QSeries, RatFunc, rf
from .errors import (
    CompositionError,
    NotInvertible,
    PrefactorError,
    WindowError,
)

_BIG = 1 << 30  # window top for series that are exactly known everywhere


def _check_trivial_prefactors(coeffs):
    for c in coeffs.values():
        if not c.prefactor.is_trivial():
            raise PrefactorError("ZLaurent/TSeries coefficients must carry no prefactor")


class ZLaurent:
    """Truncated Laurent series in z with QSeries coefficients.

    ``coeffs[k]`` is the coefficient of z^k; ``z_top`` is the largest exponent
    whose coefficient is reliable.  All coefficients share one u-order
    (``qorder``); mixed-order inputs are narrowed on construction.
    """

    __slots__ = ("coeffs", "z_top", "qorder")

    def __init__(self, coeffs: Mapping[int, QSeries], z_top: int, qorder: int | None = None):
        _check_trivial_prefactors(coeffs)
        if qorder is None:
            if not coeffs:
                raise ValueError("qorder is required for an empty ZLaurent")
            qorder = min(c.order for c in coeffs.values())
        self.qorder = qorder
        self.coeffs = {
            e: (c.truncate(qorder) if c.order > qorder else c)
            for e, c in coeffs.items()
            if e <= z_top and not c.is_zero()
        }
        self.coeffs = {e: c for e, c in self.coeffs.items() if not c.is_zero()}
        self.z_top = z_top

    # -- constructors ----------------------------------------------------------

    @classmethod
    def constant(cls, value, z_top: int, qorder: int) -> "ZLaurent":
        if isinstance(value, QSeries):
            qs = value
        else:
            qs = QSeries.const(value, qorder)
        return cls({0: qs}, z_top, qorder)

    @classmethod
    def zero(cls, z_top: int, qorder: int) -> "ZLaurent":
        return cls({}, z_top, qorder)

    @classmethod
    def from_jet(cls, jet: Mapping[int, object], z_top: int, qorder: int) -> "ZLaurent":
        """Build from {z_exp: rational | RatFunc | QSeries}."""
        coeffs = {}
        for e, v in jet.items():
            coeffs[e] = v if isinstance(v, QSeries) else QSeries.const(v, qorder)
        return cls(coeffs, z_top, qorder)

    # -- views ------------------------------------------------------------------

    @property
    def min_exp(self) -> int:
        """Effective valuation; exponents below it are exactly zero."""
        return min(self.coeffs) if self.coeffs else self.z_top + 1

    def coeff_at(self, e: int) -> QSeries:
        c = self.coeffs.get(e)
        return c if c is not None else QSeries.zero(self.qorder)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, ZLaurent):
            return NotImplemented
        return self.coeffs == other.coeffs and self.z_top == other.z_top

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items())), self.z_top))

    def __repr__(self):
        parts = [f"z^{e}*{c!r}" for e, c in sorted(self.coeffs.items())]
        return f"ZLaurent({' + '.join(parts) if parts else '0'}; z_top={self.z_top})"

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other) -> "ZLaurent":
        if isinstance(other, (int, Fraction, RatFunc)):
            other = ZLaurent.constant(other, self.z_top, self.qorder)
        if not isinstance(other, ZLaurent):
            return NotImplemented
        z_top = min(self.z_top, other.z_top)
        qorder = min(self.qorder, other.qorder)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            cur = out.get(e)
            out[e] = c if cur is None else cur + c
        return ZLaurent(out, z_top, qorder)

    __radd__ = __add__

    def __neg__(self) -> "ZLaurent":
        return ZLaurent({e: -c for e, c in self.coeffs.items()}, self.z_top, self.qorder)

    def __sub__(self, other) -> "ZLaurent":
        if isinstance(other, (int, Fraction, RatFunc)):
            other = ZLaurent.constant(other, self.z_top, self.qorder)
        if not isinstance(other, ZLaurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "ZLaurent":
        if isinstance(other, (int, Fraction, RatFunc, QSeries)):
            if isinstance(other, QSeries):
                qorder = min(self.qorder, other.order)
                out = {e: c * other for e, c in self.coeffs.items()}
                return ZLaurent(out, self.z_top, qorder)
            return ZLaurent(
                {e: c * other for e, c in self.coeffs.items()}, self.z_top, self.qorder
            )
        if not isinstance(other, ZLaurent):
            return NotImplemented
        amin, bmin = self.min_exp, other.min_exp
        z_top = min(self.z_top + bmin, other.z_top + amin, _BIG)
        qorder = min(self.qorder, other.qorder)
        if not self.coeffs or not other.coeffs:
            return ZLaurent({}, z_top, qorder)
        acc: dict[int, QSeries] = {}
        small, big = self.coeffs, other.coeffs
        if len(small) > len(big):
            small, big = big, small
        for e1, c1 in small.items():
            for e2, c2 in big.items():
                e = e1 + e2
                if e > z_top:
                    continue
                p = c1 * c2
                cur = acc.get(e)
                acc[e] = p if cur is None else cur + p
        return ZLaurent(acc, z_top, qorder)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ZLaurent":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return ZLaurent.constant(1, _BIG, self.qorder)
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def inverse(self) -> "ZLaurent":
        """Invert; the leading coefficient must be an invertible QSeries."""
        if not self.coeffs:
            raise NotInvertible("cannot invert the zero series")
        val = self.min_exp
        lead = self.coeffs[val]
        inv_lead = lead.inverse()  # raises NotInvertible on zero constant term
        # regular part h with self = z^val * lead * (1 + h), h of positive valuation
        depth = self.z_top - val  # known degrees of the regular part
        reg = {e - val: c * inv_lead for e, c in self.coeffs.items() if e != val}
        out = {0: QSeries.one(self.qorder)}
        for n in range(1, depth + 1):
            acc = None
            for j, hj in reg.items():
                if j <= n:
                    b = out.get(n - j)
                    if b is not None:
                        term = hj * b
                        acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                out[n] = -acc
        coeffs = {e - val: c * inv_lead for e, c in out.items()}
        return ZLaurent(coeffs, self.z_top - 2 * val, self.qorder)

    def scale_argument(self, m: int) -> "ZLaurent":
        """The substitution z -> m*z for a positive integer m."""
        if m <= 0:
            raise ValueError("argument scale must be a positive integer")
        if m == 1:
            return self
        out = {}
        for e, c in self.coeffs.items():
            factor = Fraction(m) ** e
            out[e] = c * rf(factor)
        return ZLaurent(out, self.z_top, self.qorder)

    def shift(self, k: int) -> "ZLaurent":
        """Multiply by z**k."""
        return ZLaurent(
            {e + k: c for e, c in self.coeffs.items()}, self.z_top + k, self.qorder
        )

    def derivative(self) -> "ZLaurent":
        out = {}
        for e, c in self.coeffs.items():
            if e != 0:
                out[e - 1] = c * e
        return ZLaurent(out, self.z_top - 1, self.qorder)

    def truncate_z(self, z_top: int) -> "ZLaurent":
        if z_top >= self.z_top:
            return self
        return ZLaurent(self.coeffs, z_top, self.qorder)

    def truncate_q(self, qorder: int) -> "ZLaurent":
        if qorder >= self.qorder:
            return self
        return ZLaurent(self.coeffs, self.z_top, qorder)

    def residue(self) -> QSeries:
        """The coefficient of 1/z.  WindowError if it lies above the window."""
        if self.z_top < -1:
            raise WindowError(
                f"residue slot z^-1 lies above the reliable window (z_top={self.z_top})"
            )
        return self.coeff_at(-1)


class TSeries:
    """Truncated power series in t with QSeries coefficients."""

    __slots__ = ("coeffs", "t_order", "qorder")

    def __init__(self, coeffs: Mapping[int, QSeries], t_order: int, qorder: int | None = None):
        _check_trivial_prefactors(coeffs)
        if qorder is None:
            if not coeffs:
                raise ValueError("qorder is required for an empty TSeries")
            qorder = min(c.order for c in coeffs.values())
        self.qorder = qorder
        self.coeffs = {
            e: (c.truncate(qorder) if c.order > qorder else c)
            for e, c in coeffs.items()
            if 0 <= e <= t_order and not c.is_zero()
        }
        self.coeffs = {e: c for e, c in self.coeffs.items() if not c.is_zero()}
        self.t_order = t_order

    @classmethod
    def constant(cls, value, t_order: int, qorder: int) -> "TSeries":
        qs = value if isinstance(value, QSeries) else QSeries.const(value, qorder)
        return cls({0: qs}, t_order, qorder)

    @classmethod
    def zero(cls, t_order: int, qorder: int) -> "TSeries":
        return cls({}, t_order, qorder)

    @classmethod
    def from_jet(cls, jet: Mapping[int, object], t_order: int, qorder: int) -> "TSeries":
        coeffs = {}
        for e, v in jet.items():
            coeffs[e] = v if isinstance(v, QSeries) else QSeries.const(v, qorder)
        return cls(coeffs, t_order, qorder)

    def coeff_at(self, e: int) -> QSeries:
        c = self.coeffs.get(e)
        return c if c is not None else QSeries.zero(self.qorder)

    def valuation(self) -> int:
        return min(self.coeffs) if self.coeffs else self.t_order + 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.coeffs == other.coeffs and self.t_order == other.t_order

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items())), self.t_order))

    def __repr__(self):
        parts = [f"t^{e}*{c!r}" for e, c in sorted(self.coeffs.items())]
        return f"TSeries({' + '.join(parts) if parts else '0'}; t_order={self.t_order})"

    def __add__(self, other) -> "TSeries":
        if isinstance(other, (int, Fraction, RatFunc)):
            other = TSeries.constant(other, self.t_order, self.qorder)
        if not isinstance(other, TSeries):
            return NotImplemented
        t_order = min(self.t_order, other.t_order)
        qorder = min(self.qorder, other.qorder)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            cur = out.get(e)
            out[e] = c if cur is None else cur + c
        return TSeries(out, t_order, qorder)

    __radd__ = __add__

    def __neg__(self) -> "TSeries":
        return TSeries({e: -c for e, c in self.coeffs.items()}, self.t_order, self.qorder)

    def __sub__(self, other) -> "TSeries":
        if isinstance(other, (int, Fraction, RatFunc)):
            other = TSeries.constant(other, self.t_order, self.qorder)
        if not isinstance(other, TSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "TSeries":
        if isinstance(other, (int, Fraction, RatFunc, QSeries)):
            if isinstance(other, QSeries):
                qorder = min(self.qorder, other.order)
                return TSeries({e: c * other for e, c in self.coeffs.items()}, self.t_order, qorder)
            return TSeries({e: c * other for e, c in self.coeffs.items()}, self.t_order, self.qorder)
        if not isinstance(other, TSeries):
            return NotImplemented
        t_order = min(self.t_order, other.t_order)
        qorder = min(self.qorder, other.qorder)
        acc: dict[int, QSeries] = {}
        for e1, c1 in self.coeffs.items():
            if e1 > t_order:
                continue
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e > t_order:
                    continue
                p = c1 * c2
                cur = acc.get(e)
                acc[e] = p if cur is None else cur + p
        return TSeries(acc, t_order, qorder)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TSeries":
        if k < 0:
            return self.inverse() ** (-k)
        out = TSeries.constant(1, self.t_order, self.qorder)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self) -> "TSeries":
        a0 = self.coeffs.get(0)
        if a0 is None or a0.is_zero():
            raise NotInvertible("t-series has zero constant term")
        inv0 = a0.inverse()
        out = {0: inv0}
        for k in range(1, self.t_order + 1):
            acc = None
            for j, aj in self.coeffs.items():
                if 1 <= j <= k:
                    b = out.get(k - j)
                    if b is not None:
                        term = aj * b
                        acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                out[k] = -(inv0 * acc)
        return TSeries(out, self.t_order, self.qorder)


# ---------------------------------------------------------------------------
# reversion and composition
# ---------------------------------------------------------------------------


def compose(f: ZLaurent, g: TSeries) -> TSeries:
    """Evaluate the z-series f at the t-series g (g must have zero constant term).

    The result order is min(g.t_order, f.z_top): coefficients of f beyond its
    window would feed exactly the truncated tail.
    """
    if not g.coeffs.get(0, QSeries.zero(g.qorder)).is_zero():
        raise CompositionError("composition requires a series with zero constant term")
    if f.coeffs and f.min_exp < 0:
        raise CompositionError("cannot compose a Laurent series with negative exponents")
    t_order = min(g.t_order, f.z_top)
    qorder = min(f.qorder, g.qorder)
    g = TSeries(g.coeffs, t_order, qorder)
    out = TSeries.zero(t_order, qorder)
    for k in range(min(f.z_top, t_order), -1, -1):
        out = out * g
        c = f.coeffs.get(k)
        if c is not None:
            out = out + TSeries.constant(c.truncate(qorder), t_order, qorder)
    return out


def revert(f: ZLaurent, t_order: int) -> TSeries:
    """Series reversion: g with f(g(t)) = t modulo t^(t_order+1).

    Requires f(0) = 0 with invertible linear coefficient, and a z-window wide
    enough to determine all requested orders.
    """
    if f.is_zero() or f.min_exp != 1:
        raise NotInvertible("reversion requires valuation exactly 1")
    if f.z_top < t_order:
        raise WindowError(
            f"reversion to order {t_order} needs f known through z^{t_order} (z_top={f.z_top})"
        )
    qorder = f.qorder
    c1 = f.coeffs[1]
    inv_c1 = c1.inverse()  # NotInvertible if the linear term is not a unit
    g_coeffs = {1: inv_c1}
    for n in range(2, t_order + 1):
        g = TSeries(g_coeffs, n, qorder)
        gp = g
        acc = None
        for k in range(2, n + 1):
            gp = gp * g
            ck = f.coeffs.get(k)
            if ck is not None:
                term = gp.coeff_at(n) * ck
                acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            g_coeffs[n] = -(acc * inv_c1)
    return TSeries(g_coeffs, t_order, qorder)


# ---------------------------------------------------------------------------
# residue generating series (term-by-term and closed form)
# ---------------------------------------------------------------------------


def residue_sum_direct(f: ZLaurent, ms: list[int], t_order: int) -> TSeries:
    """sum_{n>=r} t^n * Res_z [ f(m_1 z) ... f(m_r z) / f(z)^(n+1) ], term by term."""
    r = len(ms)
    if r == 0:
        raise ValueError("at least one scale factor is required")
    numerator = ZLaurent.constant(1, _BIG, f.qorder)
    for m in ms:
        numerator = numerator * f.scale_argument(m)
    inv = f.inverse()
    coeffs = {}
    cur = numerator * (inv ** (r + 1))
    for n in range(r, t_order + 1):
        res = cur.residue()
        if not res.is_zero():
            coeffs[n] = res
        if n < t_order:
            cur = cur * inv
    return TSeries(coeffs, t_order, f.qorder)


def residue_sum_closed(f: ZLaurent, ms: list[int], t_order: int) -> TSeries:
    """The same generating series via reversion: f(m_1 g(t))...f(m_r g(t)) / f'(g(t))."""
    g = revert(f, t_order)
    num = TSeries.constant(1, t_order, f.qorder)
    for m in ms:
        num = num * compose(f.scale_argument(m), g)
    den = compose(f.derivative(), g)
    return num * den.inverse()
