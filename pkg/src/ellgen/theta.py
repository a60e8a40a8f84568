"""Jacobi theta functions: exact series building blocks and numeric evaluation.

Symbolic side (exact, u-graded with u = q^(1/2)):

* :func:`theta_ratio_jet` -- the z-jet of
  ``f(z) = s * prod_k (1-q^(k-1)e^-z)(1-q^k e^z) / ((1-y q^(k-1)e^-z)(1-y^-1 q^k e^z))``,
  the one-variable integrand kernel of the genus residue formulas (equal to a
  quotient of two theta values, with all q^(1/8) and eta factors cancelled).
* :func:`ns_theta_ratio_jet` -- the NS-sector analogue with theta_2 in the
  denominator; its constant normalization ``i * q^(1/8)`` cannot live in Q(s)
  and is reported separately as :data:`NS_KERNEL_PREFACTOR`.
* :func:`theta_over_eta3`, :func:`theta2_over_eta3` -- the normalizing series
  ``G = theta(v,tau) / (i eta^3)`` and ``G_NS = theta_2(v,tau) / (i eta^3)``
  as exact products.

Numeric side: the four classical theta products and eta, evaluated in double
precision after quasi-periodicity argument reduction (without reduction the
raw products lose all precision once |Im v| >> Im tau).
"""

from __future__ import annotations

import cmath
import json
import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .coeffring import PF_TRIVIAL, Prefactor, QSeries, RatFunc, RF_S, rf
from .errors import DomainError
from .series import ZLaurent

_CACHE_ENV = "ELLGEN_CACHE_DIR"
_CACHE_VERSION = 1

# Normalization carried by the NS kernel ratio: i * q^(1/8) per factor.
NS_KERNEL_PREFACTOR = Prefactor(1, 1, 0)


# ---------------------------------------------------------------------------
# exact jets
# ---------------------------------------------------------------------------


def _one_minus_exp(scalar: RatFunc, u_pow: int, c: Fraction, z_top: int, u_order: int) -> ZLaurent:
    """The factor 1 - scalar * u^u_pow * e^(c*z) as an exact jet."""
    jet = {}
    term = Fraction(1)
    for j in range(z_top + 1):
        coeff = scalar * rf(-term)
        if not coeff.is_zero():
            jet[j] = QSeries({u_pow: coeff}, u_order)
        term = term * c / (j + 1)
    one = QSeries.one(u_order)
    jet[0] = jet[0] + one if 0 in jet else one
    return ZLaurent(jet, z_top, u_order)


def _exp_jet(c: Fraction, z_top: int, u_order: int) -> ZLaurent:
    jet = {}
    term = Fraction(1)
    for j in range(z_top + 1):
        jet[j] = QSeries.const(term, u_order)
        term = term * c / (j + 1)
    return ZLaurent(jet, z_top, u_order)


def _serialize_zlaurent(zl: ZLaurent) -> dict:
    coeffs = {}
    for e, qs in zl.coeffs.items():
        coeffs[str(e)] = [
            [ue, list(c.nc), c.nd, list(c.dc)] for ue, c in sorted(qs.coeffs.items())
        ]
    return {"z_top": zl.z_top, "qorder": zl.qorder, "coeffs": coeffs}


def _deserialize_zlaurent(data: dict) -> ZLaurent:
    from .coeffring import _detect_hint  # private but stable within the package

    qorder = data["qorder"]
    coeffs = {}
    for e_str, rows in data["coeffs"].items():
        qs = {}
        for ue, nc, nd, dc in rows:
            dc_t = tuple(dc)
            qs[ue] = RatFunc(tuple(nc), nd, dc_t, _detect_hint(dc_t))
        coeffs[int(e_str)] = QSeries(qs, qorder)
    return ZLaurent(coeffs, data["z_top"], qorder)


def _cache_load(name: str):
    root = os.environ.get(_CACHE_ENV)
    if not root:
        return None
    path = os.path.join(root, name)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("version") != _CACHE_VERSION:
            return None
        return _deserialize_zlaurent(data["payload"])
    except (OSError, ValueError, KeyError):
        return None


def _cache_store(name: str, zl: ZLaurent) -> None:
    root = os.environ.get(_CACHE_ENV)
    if not root:
        return
    try:
        os.makedirs(root, exist_ok=True)
        path = os.path.join(root, name)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump({"version": _CACHE_VERSION, "payload": _serialize_zlaurent(zl)}, fh)
        os.replace(tmp, path)
    except OSError:
        pass


@lru_cache(maxsize=32)
def theta_ratio_jet(q_order: int, z_order: int) -> ZLaurent:
    """Exact z-jet of the elliptic integrand kernel f(z).

    f has f(0) = 0 with linear coefficient s/(1-s^2) * (1 + O(q)); the overall
    s = y^(1/2) is folded into the coefficients.  Coefficients are exact in
    Q(s) at u-order 2*q_order.
    """
    if q_order < 0 or z_order < 1:
        raise DomainError("theta_ratio_jet requires q_order >= 0 and z_order >= 1")
    cached = _cache_load(f"fratio_v{_CACHE_VERSION}_q{q_order}_z{z_order}.json")
    if cached is not None:
        return cached
    u_order = 2 * q_order
    y = RF_S * RF_S
    y_inv = RatFunc.s_power(-2)
    one = rf(1)
    minus, plus = Fraction(-1), Fraction(1)

    num = _one_minus_exp(one, 0, minus, z_order, u_order)  # 1 - e^-z
    for k in range(2, q_order + 2):
        num = num * _one_minus_exp(one, 2 * (k - 1), minus, z_order, u_order)
    for k in range(1, q_order + 1):
        num = num * _one_minus_exp(one, 2 * k, plus, z_order, u_order)

    den = _one_minus_exp(y, 0, minus, z_order, u_order)  # 1 - y e^-z
    for k in range(2, q_order + 2):
        den = den * _one_minus_exp(y, 2 * (k - 1), minus, z_order, u_order)
    for k in range(1, q_order + 1):
        den = den * _one_minus_exp(y_inv, 2 * k, plus, z_order, u_order)

    out = (num * den.inverse()) * RF_S
    out = out.truncate_z(z_order)
    _cache_store(f"fratio_v{_CACHE_VERSION}_q{q_order}_z{z_order}.json", out)
    return out


@lru_cache(maxsize=32)
def ns_theta_ratio_jet(q_order: int, z_order: int) -> ZLaurent:
    """Exact z-jet of the NS integrand kernel body.

    The full kernel is NS_KERNEL_PREFACTOR times this body; the body is
    ``e^(z/2) * prod_k (1-q^(k-1)e^-z)(1-q^k e^z) /
    ((1-y q^(k-1/2) e^-z)(1-y^-1 q^(k-1/2) e^z))`` with q = u^2, so odd powers
    of u appear.
    """
    if q_order < 0 or z_order < 1:
        raise DomainError("ns_theta_ratio_jet requires q_order >= 0 and z_order >= 1")
    cached = _cache_load(f"fratio_ns_v{_CACHE_VERSION}_q{q_order}_z{z_order}.json")
    if cached is not None:
        return cached
    u_order = 2 * q_order
    y = RF_S * RF_S
    y_inv = RatFunc.s_power(-2)
    one = rf(1)
    minus, plus = Fraction(-1), Fraction(1)

    num = _exp_jet(Fraction(1, 2), z_order, u_order)
    num = num * _one_minus_exp(one, 0, minus, z_order, u_order)
    for k in range(2, q_order + 2):
        num = num * _one_minus_exp(one, 2 * (k - 1), minus, z_order, u_order)
    for k in range(1, q_order + 1):
        num = num * _one_minus_exp(one, 2 * k, plus, z_order, u_order)

    den = ZLaurent.constant(1, z_order, u_order)
    for k in range(1, q_order + 1):
        den = den * _one_minus_exp(y, 2 * k - 1, minus, z_order, u_order)
        den = den * _one_minus_exp(y_inv, 2 * k - 1, plus, z_order, u_order)

    out = num * den.inverse()
    out = out.truncate_z(z_order)
    _cache_store(f"fratio_ns_v{_CACHE_VERSION}_q{q_order}_z{z_order}.json", out)
    return out


def _inverse_square_factor(k2: int, u_order: int) -> QSeries:
    """(1 - u^k2)^(-2) = sum_n (n+1) u^(k2*n), exact."""
    coeffs = {}
    n = 0
    while k2 * n <= u_order:
        coeffs[k2 * n] = rf(n + 1)
        n += 1
    return QSeries(coeffs, u_order)


@lru_cache(maxsize=64)
def theta_over_eta3(q_order: int) -> QSeries:
    """G(y, q) = y^(-1/2) prod_k (1-y q^(k-1))(1-y^-1 q^k) / (1-q^k)^2.

    Returned with the y^(-1/2) tracked as prefactor s_pow = -1; numerically it
    equals theta(v, tau) / (i * eta(tau)^3).
    """
    if q_order < 0:
        raise DomainError("q_order must be >= 0")
    u_order = 2 * q_order
    y = RF_S * RF_S
    y_inv = RatFunc.s_power(-2)
    body = QSeries.const(1 - y, u_order)  # the k = 1 factor (1 - y q^0)
    for k in range(2, q_order + 2):
        body = body * QSeries({0: rf(1), 2 * (k - 1): -y}, u_order)
    for k in range(1, q_order + 1):
        body = body * QSeries({0: rf(1), 2 * k: -y_inv}, u_order)
        body = body * _inverse_square_factor(2 * k, u_order)
    return body.with_prefactor(Prefactor(0, 0, -1))


@lru_cache(maxsize=64)
def theta2_over_eta3(q_order: int) -> QSeries:
    """G_NS(y, q) = (i q^(1/8))^(-1) prod_k (1-y q^(k-1/2))(1-y^-1 q^(k-1/2)) / (1-q^k)^2.

    The (i q^(1/8))^(-1) normalization lives in the prefactor; numerically this
    equals theta_2(v, tau) / (i * eta(tau)^3).
    """
    if q_order < 0:
        raise DomainError("q_order must be >= 0")
    u_order = 2 * q_order
    y = RF_S * RF_S
    y_inv = RatFunc.s_power(-2)
    body = QSeries.one(u_order)
    for k in range(1, q_order + 1):
        body = body * QSeries({0: rf(1), 2 * k - 1: -y}, u_order)
        body = body * QSeries({0: rf(1), 2 * k - 1: -y_inv}, u_order)
        body = body * _inverse_square_factor(2 * k, u_order)
    return body.with_prefactor(Prefactor(3, -1, 0))


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------


class ThetaKind(str, Enum):
    THETA = "theta"
    THETA1 = "theta1"
    THETA2 = "theta2"
    THETA3 = "theta3"


@dataclass(frozen=True)
class EvalPoint:
    """A numeric evaluation point (v, tau) with Im tau > 0."""

    v: complex
    tau: complex

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise DomainError("tau must lie in the upper half-plane")

    @property
    def y(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.v)

    @property
    def q(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.tau)

    @property
    def s(self) -> complex:
        return cmath.exp(1j * cmath.pi * self.v)

    @property
    def u(self) -> complex:
        return cmath.exp(1j * cmath.pi * self.tau)


def _num_factors(tau: complex) -> int:
    # |q|^K < 1e-18: truncation error bounded by the geometric tail
    return math.ceil(18.0 * math.log(10.0) / (2.0 * math.pi * tau.imag)) + 2


def _reduce_argument(v: complex, tau: complex):
    """Shift v by the period lattice into |Im w| <= Im(tau)/2, |Re w| <= 1/2.

    Returns (w, m_tau, m_one): v = w + m_one + m_tau * tau.
    """
    v = complex(v)
    tau = complex(tau)
    m_tau = round(v.imag / tau.imag)
    rest = v - m_tau * tau
    m_one = round(rest.real)
    w = rest - m_one
    return w, m_tau, m_one


_KIND_SIGNS = {
    # (sign under v -> v+1, sign under v -> v+tau); all kinds share the
    # multiplier q^(-1/2) e^(-2 pi i v) in the tau direction.
    ThetaKind.THETA: (-1, -1),
    ThetaKind.THETA1: (-1, 1),
    ThetaKind.THETA2: (1, -1),
    ThetaKind.THETA3: (1, 1),
}


def _theta_product_with_derivative(kind: ThetaKind, w: complex, tau: complex):
    """(theta_kind(w, tau), d/dw theta_kind(w, tau)) by product-rule accumulation."""
    two_pi_i = 2j * cmath.pi
    q = cmath.exp(two_pi_i * tau)
    x = cmath.exp(two_pi_i * w)
    kfac = _num_factors(tau)

    if kind == ThetaKind.THETA:
        val = 1j * cmath.exp(two_pi_i * tau / 8) * cmath.exp(-1j * cmath.pi * w)
        dval = -1j * cmath.pi * val
    elif kind == ThetaKind.THETA1:
        val = cmath.exp(two_pi_i * tau / 8) * cmath.exp(1j * cmath.pi * w)
        dval = 1j * cmath.pi * val
    else:
        val, dval = 1.0 + 0j, 0j

    x_inv = 1 / x
    if kind in (ThetaKind.THETA, ThetaKind.THETA1):
        # theta:   (1 - q^(k-1) x)(1 - q^k / x);  theta1: (1 + q^k x)(1 + q^(k-1) / x)
        sign = -1 if kind == ThetaKind.THETA else 1
        qkm1 = 1 + 0j
        for _ in range(kfac):
            qk = qkm1 * q
            if kind == ThetaKind.THETA:
                a, b = sign * qkm1 * x, sign * qk * x_inv
            else:
                a, b = sign * qk * x, sign * qkm1 * x_inv
            f1, d1 = 1 + a, two_pi_i * a
            f2, d2 = 1 + b, -two_pi_i * b
            const = 1 - qk
            val, dval = val * f1, dval * f1 + val * d1
            val, dval = val * f2, dval * f2 + val * d2
            val, dval = val * const, dval * const
            qkm1 = qk
        return val, dval
    # theta2: (1 - q^(k-1/2) x)(1 - q^(k-1/2) / x);  theta3 with + signs
    sign = -1 if kind == ThetaKind.THETA2 else 1
    qk = 1 + 0j
    qkh = cmath.exp(1j * cmath.pi * tau)  # q^(k-1/2), starting at k = 1
    for _ in range(kfac):
        qk *= q
        a, b = sign * qkh * x, sign * qkh * x_inv
        f1, d1 = 1 + a, two_pi_i * a
        f2, d2 = 1 + b, -two_pi_i * b
        const = 1 - qk
        val, dval = val * f1, dval * f1 + val * d1
        val, dval = val * f2, dval * f2 + val * d2
        val, dval = val * const, dval * const
        qkh *= q
    return val, dval


def _theta_reduced(kind: ThetaKind, v: complex, tau: complex):
    """(value, derivative) of theta_kind at v with argument reduction applied."""
    if complex(tau).imag <= 0:
        raise DomainError("tau must lie in the upper half-plane")
    kind = ThetaKind(kind)
    w, m_tau, m_one = _reduce_argument(v, tau)
    sign_one, sign_tau = _KIND_SIGNS[kind]
    # theta(w + m_one + m_tau*tau) =
    #   sign_one^m_one * sign_tau^m_tau * q^(-m_tau^2/2) e^(-2 pi i m_tau w) * theta(w)
    mult = (sign_one ** (m_one % 2)) * (sign_tau ** (m_tau % 2)) * cmath.exp(
        -1j * cmath.pi * tau * m_tau * m_tau
    ) * cmath.exp(-2j * cmath.pi * m_tau * w)
    val_w, dval_w = _theta_product_with_derivative(kind, w, tau)
    value = mult * val_w
    deriv = mult * (dval_w - 2j * cmath.pi * m_tau * val_w)
    return value, deriv


def theta_value(kind: ThetaKind | str, v: complex, tau: complex) -> complex:
    """Numeric theta function (product form, argument-reduced)."""
    return _theta_reduced(ThetaKind(kind), v, tau)[0]


def theta_derivative(kind: ThetaKind | str, v: complex, tau: complex) -> complex:
    """d/dv of the theta function, by exact differentiation of the product."""
    return _theta_reduced(ThetaKind(kind), v, tau)[1]


def eta_value(tau: complex) -> complex:
    """Dedekind eta: q^(1/24) prod (1-q^k)."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError("tau must lie in the upper half-plane")
    q = cmath.exp(2j * cmath.pi * tau)
    out = cmath.exp(2j * cmath.pi * tau / 24)
    qk = 1 + 0j
    for _ in range(_num_factors(tau)):
        qk *= q
        out *= 1 - qk
    return out
