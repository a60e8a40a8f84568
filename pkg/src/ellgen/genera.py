"""Genera of (possibly virtual) complete intersections in projective space.

Everything here is a residue computation: a genus of Y^N_{m_1..m_r} inside
CP^(N-1) is the z^(-1) coefficient of a product of kernel jets

    prod_i f(m_i z) / f(z)^N

for the kernel f matching the genus (rational for Euler numbers, the
chi_y kernel at q = 0, theta quotients for the two-variable genera), divided
by the normalizing series G.  No smoothness is assumed anywhere: for singular
or non-transverse data the residue defines the (virtual) genus.

Closed generating functions in an auxiliary variable t are provided as
independent cross-checks: the coefficient of t^(N-1) must reproduce the
residue value for every N.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .coeffring import PF_TRIVIAL, Prefactor, QSeries, RF_S, RatFunc, rf
from .errors import CertificateError, ParityWarning, RankError
from .series import TSeries, ZLaurent, residue_sum_closed
from .theta import (
    NS_KERNEL_PREFACTOR,
    ns_theta_ratio_jet,
    theta2_over_eta3,
    theta_over_eta3,
    theta_ratio_jet,
)


@dataclass(frozen=True)
class CISpec:
    """A (virtual) complete intersection: degrees (m_1..m_r) inside CP^(N-1)."""

    n: int
    degrees: tuple[int, ...]

    def __init__(self, n: int, degrees):
        degrees = tuple(sorted(int(m) for m in degrees))
        if n < 2:
            raise RankError("ambient projective space needs N >= 2")
        if not degrees:
            raise RankError("at least one degree is required")
        if any(m < 1 for m in degrees):
            raise RankError("degrees must be positive integers")
        if n < len(degrees) + 1:
            raise RankError(
                f"virtual dimension N-1-r = {n - 1 - len(degrees)} is negative"
            )
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "degrees", degrees)

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def dim(self) -> int:
        """Complex (virtual) dimension d = N - 1 - r."""
        return self.n - 1 - self.r

    @property
    def degree_sum(self) -> int:
        return sum(self.degrees)

    def label(self) -> str:
        return f"Y^{self.n}_{{{','.join(map(str, self.degrees))}}}"


@dataclass(frozen=True)
class GenusResult:
    """An exact genus: q-expansion with Laurent-polynomial-in-s coefficients."""

    spec: CISpec
    kind: str  # "elliptic" | "ns_elliptic"
    body: QSeries
    q_order: int
    u_order: int
    certificate: bool
    laurent: dict  # u_exp -> [(s_exp, Fraction), ...]
    s_range: tuple[int, int]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def coefficient(self, u_exp: int):
        return self.laurent.get(u_exp, [])

    def evaluate(self, v: complex, tau: complex) -> complex:
        return self.body.evaluate(v, tau)

    def is_zero(self) -> bool:
        return self.body.is_zero()


def _scaled_product(kernel: ZLaurent, spec: CISpec) -> QSeries:
    """Residue of prod_i kernel(m_i z) * kernel(z)^(-N)."""
    numerator = kernel.scale_argument(spec.degrees[0])
    for m in spec.degrees[1:]:
        numerator = numerator * kernel.scale_argument(m)
    inv = kernel.inverse()
    integrand = numerator * inv**spec.n
    return integrand.residue()


def _certify_laurent(body: QSeries, dim: int, what: str):
    """Every u-coefficient must be a Laurent polynomial in s; the u^0 slice
    must have exponents within [-dim, dim].  Returns (table, s_range)."""
    table = {}
    lo, hi = 0, 0
    for ue, c in body.items():
        pairs = c.laurent_pairs()
        if pairs is None:
            raise CertificateError(
                f"{what}: u^{ue} coefficient is not a Laurent polynomial in s: {c!r}"
            )
        table[ue] = pairs
        if pairs:
            lo = min(lo, pairs[0][0])
            hi = max(hi, pairs[-1][0])
    zero_slice = table.get(0, [])
    if zero_slice:
        if zero_slice[0][0] < -dim or zero_slice[-1][0] > dim:
            raise CertificateError(
                f"{what}: u^0 exponents {zero_slice[0][0]}..{zero_slice[-1][0]} "
                f"exceed [-{dim}, {dim}]"
            )
    return table, (lo, hi)


# ---------------------------------------------------------------------------
# Euler numbers
# ---------------------------------------------------------------------------


def _euler_kernel(z_top: int) -> ZLaurent:
    """z/(1+z) = z - z^2 + z^3 - ... (q plays no role)."""
    return ZLaurent.from_jet({k: (-1) ** (k - 1) for k in range(1, z_top + 1)}, z_top, 0)


def euler_number(spec: CISpec) -> int:
    """Euler characteristic via the residue of prod m_i(1+z)^N / ((1+m_i z) z^(N-r))."""
    res = _scaled_product(_euler_kernel(spec.n + 1), spec)
    value = res.constant_term().as_fraction()
    if value.denominator != 1:
        raise CertificateError(f"Euler number of {spec.label()} not an integer: {value}")
    return int(value)


def euler_number_alternating_sum(spec: CISpec) -> int:
    """Hypersurface closed form: sum_{k=2}^N (-1)^k C(N,k) m^(k-1)."""
    if spec.r != 1:
        raise RankError("the alternating-sum closed form applies to hypersurfaces only")
    n, m = spec.n, spec.degrees[0]
    return sum((-1) ** k * comb(n, k) * m ** (k - 1) for k in range(2, n + 1))


def euler_generating_series(degrees, t_order: int) -> TSeries:
    """sum_N t^(N-1) chi(Y^N_{m..}) = 1/(1-t)^2 * prod m_j t / (1 + (m_j-1) t)."""
    one = TSeries.constant(1, t_order, 0)
    t = TSeries.from_jet({1: 1}, t_order, 0)
    out = ((one - t) ** 2).inverse()
    for m in degrees:
        out = out * (t * m) * (one + t * (m - 1)).inverse()
    return out


# ---------------------------------------------------------------------------
# chi_y genus
# ---------------------------------------------------------------------------


def _chi_y_kernel(z_top: int) -> ZLaurent:
    """(1 - e^-z)/(1 - y e^-z) as an exact jet over Q(s), q absent."""
    y = RF_S * RF_S
    num = {}
    den = {0: 1 - y}
    term = Fraction(1)
    for k in range(z_top + 1):
        if k > 0:
            num[k] = rf(-term)
            den[k] = y * rf(-term)
        term = term * -1 / (k + 1)
    zl_num = ZLaurent.from_jet(num, z_top, 0)
    zl_den = ZLaurent.from_jet(den, z_top, 0)
    return zl_num * zl_den.inverse()


def chi_y_genus(spec: CISpec) -> RatFunc:
    """The chi_{-y} genus, certified to be a polynomial in y of degree <= dim."""
    res = _scaled_product(_chi_y_kernel(spec.n + 1), spec)
    y = RF_S * RF_S
    value = res.constant_term() / (1 - y)
    pairs = value.laurent_pairs()
    if pairs is None:
        raise CertificateError(f"chi_y of {spec.label()} failed to clear denominators")
    if pairs and (pairs[0][0] < 0 or pairs[-1][0] > 2 * spec.dim or any(e % 2 for e, _ in pairs)):
        raise CertificateError(
            f"chi_y of {spec.label()} is not a y-polynomial of degree <= {spec.dim}"
        )
    return value


def y_polynomial_coeffs(value: RatFunc) -> list[Fraction]:
    """Coefficients [c_0, c_1, ...] of a certified polynomial in y = s^2."""
    pairs = value.laurent_pairs()
    if pairs is None or (pairs and (pairs[0][0] < 0 or any(e % 2 for e, _ in pairs))):
        raise CertificateError("value is not a polynomial in y")
    out = [Fraction(0)] * ((pairs[-1][0] // 2 + 1) if pairs else 1)
    for e, c in pairs:
        out[e // 2] = c
    return out


def chi_y_generating_series(degrees, t_order: int) -> TSeries:
    """sum_N t^(N-1) chi_{-y}(Y^N_{m..}) as an exact t-series.

    Equals 1/((1-t)(1-yt)) * prod_j ((1-yt)^m_j - (1-t)^m_j) /
    ((1-yt)^m_j - y (1-t)^m_j).
    """
    y = RF_S * RF_S
    one = TSeries.constant(1, t_order, 0)
    t = TSeries.from_jet({1: 1}, t_order, 0)
    one_minus_t = one - t
    one_minus_yt = one - t * y
    out = (one_minus_t * one_minus_yt).inverse()
    for m in degrees:
        a = one_minus_yt**m
        b = one_minus_t**m
        out = out * (a - b) * (a - b * y).inverse()
    return out


# ---------------------------------------------------------------------------
# elliptic genera
# ---------------------------------------------------------------------------


def elliptic_genus(spec: CISpec, q_order: int) -> GenusResult:
    """Two-variable elliptic genus as an exact q-expansion.

    The q^0 slice equals s^(-dim) * chi_y; for N = 2 the result is the
    constant m (points), and d = 0 or Calabi-Yau cases reproduce the known
    constants/zeroes exactly.
    """
    f = theta_ratio_jet(q_order, spec.n + 1)
    res = _scaled_product(f, spec)
    body = (res * theta_over_eta3(q_order).inverse()).fold_prefactor()
    table, s_range = _certify_laurent(body, spec.dim, f"elliptic genus of {spec.label()}")
    return GenusResult(
        spec=spec,
        kind="elliptic",
        body=body,
        q_order=q_order,
        u_order=2 * q_order,
        certificate=True,
        laurent=table,
        s_range=s_range,
    )


def elliptic_genus_generating_series(degrees, t_order: int, q_order: int) -> TSeries:
    """sum_N t^(N-1) chi(Y^N_{m..}; q, y), via series reversion of the kernel.

    The t^(N-1) coefficient equals elliptic_genus(CISpec(N, degrees)).body.
    """
    f = theta_ratio_jet(q_order, t_order + 1)
    rhs = residue_sum_closed(f, list(degrees), t_order)
    ginv = theta_over_eta3(q_order).inverse().fold_prefactor()
    return rhs * ginv


def ns_elliptic_genus(spec: CISpec, q_order: int) -> GenusResult:
    """NS-sector elliptic genus: half-integer q-grading, theta_2 kernel.

    The body is graded in u = q^(1/2) and carries the prefactor
    (i q^(1/8))^(-dim).  When N - sum(m_i) is odd the standard parity
    hypothesis fails; the residue is still well-defined and is returned with
    a warning attached.
    """
    warns = []
    if (spec.n - spec.degree_sum) % 2:
        warns.append(
            f"N - sum(degrees) = {spec.n - spec.degree_sum} is odd: "
            "NS parity hypothesis fails; result is formal"
        )
        warnings.warn(warns[-1], ParityWarning, stacklevel=2)
    beta = ns_theta_ratio_jet(q_order, spec.n + 1)
    res = _scaled_product(beta, spec)
    body = res * theta2_over_eta3(q_order).inverse()
    # the r scaled kernels and N inverse kernels each carry i*q^(1/8)
    body = body.with_prefactor(
        body.prefactor.combine(NS_KERNEL_PREFACTOR.power(spec.r - spec.n))
    )
    expected = NS_KERNEL_PREFACTOR.power(-spec.dim)
    assert body.prefactor == expected, (body.prefactor, expected)
    table, s_range = _certify_laurent(body, spec.dim, f"NS elliptic genus of {spec.label()}")
    return GenusResult(
        spec=spec,
        kind="ns_elliptic",
        body=body,
        q_order=q_order,
        u_order=2 * q_order,
        certificate=True,
        laurent=table,
        s_range=s_range,
        warnings=tuple(warns),
    )


# ---------------------------------------------------------------------------
# Witten genera (sigma_1, sigma_2, sigma_3)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WittenResult:
    """A Witten genus: exact specialized coefficients plus a numeric value."""

    k: int
    spec: CISpec
    q_order: int
    tau: complex
    value: complex
    # exact (real, imag) Fraction pairs per u-exponent, before the prefactor
    exact_coeffs: tuple  # ((u_exp, Fraction re, Fraction im), ...)
    prefactor: Prefactor
    genus: GenusResult


def _specialize_at_i(pairs) -> tuple[Fraction, Fraction]:
    """Evaluate a Laurent polynomial in s at s = i, exactly (Gaussian rational)."""
    re = Fraction(0)
    im = Fraction(0)
    for e, c in pairs:
        k = e % 4
        if k == 0:
            re += c
        elif k == 1:
            im += c
        elif k == 2:
            re -= c
        else:
            im -= c
    return re, im


def _specialize_at_one(pairs) -> tuple[Fraction, Fraction]:
    return sum((c for _, c in pairs), Fraction(0)), Fraction(0)


def witten_genus(k: int, spec: CISpec, q_order: int, tau: complex) -> WittenResult:
    """sigma_k of the loop space of Y: specializations of the (NS) elliptic genus.

    sigma_1 = elliptic genus at y = -1 (v = 1/2, exact Gaussian-rational body);
    sigma_2 = NS genus at y = 1 (v = 0); sigma_3 = NS genus at y = -1 (v = 1/2).
    """
    import cmath

    if k not in (1, 2, 3):
        raise RankError("sigma index must be 1, 2 or 3")
    if complex(tau).imag <= 0:
        raise RankError("tau must lie in the upper half-plane")
    if k == 1:
        genus = elliptic_genus(spec, q_order)
        v = 0.5
        special = {e: _specialize_at_i(pairs) for e, pairs in genus.laurent.items()}
    elif k == 2:
        genus = ns_elliptic_genus(spec, q_order)
        v = 0.0
        special = {e: _specialize_at_one(pairs) for e, pairs in genus.laurent.items()}
    else:
        genus = ns_elliptic_genus(spec, q_order)
        v = 0.5
        special = {e: _specialize_at_i(pairs) for e, pairs in genus.laurent.items()}
    u_val = cmath.exp(1j * cmath.pi * tau)
    total = 0j
    for e in sorted(special):
        re, im = special[e]
        total += complex(re + 0j) * u_val**e + 1j * complex(im) * u_val**e
    total *= genus.body.prefactor.numeric(v, tau)
    coeffs = tuple((e, special[e][0], special[e][1]) for e in sorted(special))
    return WittenResult(
        k=k,
        spec=spec,
        q_order=q_order,
        tau=tau,
        value=total,
        exact_coeffs=coeffs,
        prefactor=genus.body.prefactor,
        genus=genus,
    )
