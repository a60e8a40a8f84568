"""Canonical serialization and rendering of computation results.

Every result type maps to one canonical JSON-able dict (`*_payload`
functions); `render` turns such a dict into deterministic json, a LaTeX
q-expansion, or a human-readable text block.  Rational numbers travel as
"num/den" strings so exactness survives the wire; `parse_genus_payload`
reconstructs the exact body bit-for-bit.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coeffring import PF_TRIVIAL, Prefactor, QSeries, RatFunc
from .errors import CertificateError, DomainError
from .genera import CISpec, GenusResult, WittenResult
from .lgside import CorrespondenceReport
from .series import TSeries

SCHEMA_VERSION = 1


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


def _complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def qseries_rows(qs: QSeries) -> list:
    """[[u_exp, [[s_exp, "num/den"], ...]], ...] for a Laurent-certified series."""
    rows = []
    for ue, c in qs.items():
        pairs = c.laurent_pairs()
        if pairs is None:
            raise CertificateError(
                f"u^{ue} coefficient is not a Laurent polynomial in s; cannot serialize"
            )
        rows.append([ue, [[e, _frac_str(f)] for e, f in pairs]])
    return rows


def rows_to_qseries(rows: list, order: int, prefactor: Prefactor = PF_TRIVIAL) -> QSeries:
    coeffs = {}
    for ue, pairs in rows:
        c = RatFunc.from_fraction(0)
        for e, fs in pairs:
            c = c + RatFunc.s_power(int(e)) * RatFunc.from_fraction(_parse_frac(fs))
        coeffs[int(ue)] = c
    return QSeries(coeffs, order, prefactor)


def spec_payload(spec: CISpec) -> dict:
    return {"n": spec.n, "degrees": list(spec.degrees)}


def genus_payload(result: GenusResult) -> dict:
    pf = result.body.prefactor
    return {
        "schema": SCHEMA_VERSION,
        "kind": result.kind,
        "spec": spec_payload(result.spec),
        "q_order": result.q_order,
        "u_order": result.u_order,
        "coefficients": qseries_rows(result.body),
        "prefactor": {"i_pow": pf.i_pow, "q8_pow": pf.q8_pow, "s_pow": pf.s_pow},
        "certificate": result.certificate,
        "s_range": list(result.s_range),
        "warnings": list(result.warnings),
    }


def parse_genus_payload(payload: dict) -> GenusResult:
    """Reconstruct a GenusResult exactly from its payload."""
    pf = payload.get("prefactor", {})
    prefactor = Prefactor(
        int(pf.get("i_pow", 0)) % 4, int(pf.get("q8_pow", 0)), int(pf.get("s_pow", 0))
    )
    spec = CISpec(payload["spec"]["n"], payload["spec"]["degrees"])
    body = rows_to_qseries(payload["coefficients"], int(payload["u_order"]), prefactor)
    table = {
        int(ue): [(int(e), _parse_frac(fs)) for e, fs in pairs]
        for ue, pairs in payload["coefficients"]
    }
    lo = min((p[0][0] for p in table.values() if p), default=0)
    hi = max((p[-1][0] for p in table.values() if p), default=0)
    return GenusResult(
        spec=spec,
        kind=payload["kind"],
        body=body,
        q_order=int(payload["q_order"]),
        u_order=int(payload["u_order"]),
        certificate=bool(payload["certificate"]),
        laurent=table,
        s_range=(min(lo, 0), max(hi, 0)),
        warnings=tuple(payload.get("warnings", ())),
    )


def euler_payload(spec: CISpec, value: int) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "euler",
        "spec": spec_payload(spec),
        "value": str(value),
    }


def chi_y_payload(spec: CISpec, coeffs: list[Fraction]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "chi_y",
        "spec": spec_payload(spec),
        "coefficients": [_frac_str(c) for c in coeffs],
    }


def witten_payload(result: WittenResult) -> dict:
    pf = result.prefactor
    return {
        "schema": SCHEMA_VERSION,
        "kind": "witten",
        "sigma_k": result.k,
        "spec": spec_payload(result.spec),
        "q_order": result.q_order,
        "tau": _complex_pair(result.tau),
        "value": _complex_pair(result.value),
        "exact_coefficients": [
            [ue, _frac_str(re), _frac_str(im)] for ue, re, im in result.exact_coeffs
        ],
        "prefactor": {"i_pow": pf.i_pow, "q8_pow": pf.q8_pow, "s_pow": pf.s_pow},
    }


def genseries_payload(series_kind: str, degrees, series: TSeries, q_order: int | None) -> dict:
    rows = []
    for te, c in sorted(series.coeffs.items()):
        rows.append([te, qseries_rows(c)])
    return {
        "schema": SCHEMA_VERSION,
        "kind": "genseries",
        "series_kind": series_kind,
        "degrees": list(degrees),
        "t_order": series.t_order,
        "q_order": q_order,
        "coefficients": rows,
    }


def report_payload(report: CorrespondenceReport, tol: float) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "lgcheck",
        "check_kind": report.kind,
        "spec": spec_payload(report.spec),
        "geometric_value": _complex_pair(report.geometric_value),
        "lg_value": _complex_pair(report.lg_value),
        "abs_diff": report.abs_diff,
        "rel_diff": report.rel_diff,
        "q_order_used": report.q_order_used,
        "truncation_bound": report.truncation_bound,
        "preconditions": [[name, bool(ok)] for name, ok in report.preconditions],
        "tol": tol,
        "passed": report.passed(tol),
    }


def selftest_payload(checks: list) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "selftest",
        "passed": all(ok for _, ok, _ in checks),
        "checks": [[name, bool(ok), detail] for name, ok, detail in checks],
    }


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _exp_str(var: str, e) -> str:
    if e == 1:
        return var
    if isinstance(e, Fraction) or (isinstance(e, float) and e != int(e)):
        f = Fraction(e).limit_denominator()
        return f"{var}^{{{f.numerator}/{f.denominator}}}"
    e = int(e)
    if 0 <= e <= 9:
        return f"{var}^{e}"
    return f"{var}^{{{e}}}"


def laurent_latex(pairs) -> str:
    """Laurent polynomial in y from (s_exp, Fraction) pairs, s^2 = y."""
    if not pairs:
        return "0"
    terms = []
    for e, c in pairs:
        ye = Fraction(e, 2)
        if ye == 0:
            terms.append(_frac_str(c))
            continue
        if ye.denominator == 1:
            mono = "y" if ye == 1 else ("y^{%d}" % ye if ye < 0 or ye > 9 else f"y^{ye}")
        else:
            mono = f"y^{{{ye.numerator}/{ye.denominator}}}"
        if c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append(f"-{mono}")
        else:
            terms.append(f"{_frac_str(c)}{mono}")
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def _q_power_str(ue: int) -> str:
    """q-power label for a u-exponent (u^2 = q)."""
    if ue % 2 == 0:
        return _exp_str("q", ue // 2)
    return f"q^{{{ue}/2}}"


def genus_latex(payload: dict) -> str:
    rows = payload["coefficients"]
    q_next = payload["q_order"] + 1
    tail = f"O({_exp_str('q', q_next)})"
    pf = payload.get("prefactor", {})
    pf_i, pf_q8 = pf.get("i_pow", 0), pf.get("q8_pow", 0)
    if not rows:
        return f"0 + {tail}"
    parts = []
    for ue, pairs in rows:
        body = laurent_latex([(int(e), _parse_frac(f)) for e, f in pairs])
        if ue == 0:
            parts.append(body)
        else:
            wrapped = body if "+" not in body[1:] and "-" not in body[1:] else f"({body})"
            parts.append(f"{wrapped}{_q_power_str(ue)}")
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    out += "+" + tail
    if pf_i or pf_q8:
        out = f"(i q^{{1/8}})^{{{_ns_pf_power(pf_i, pf_q8)}}}\\left[{out}\\right]"
    return out


def _ns_pf_power(i_pow: int, q8_pow: int) -> int:
    # the NS prefactor is always (i q^(1/8))^k with k = q8_pow and i_pow = k mod 4
    return q8_pow


def _spec_label(payload_spec: dict) -> str:
    n = payload_spec["n"]
    degs = payload_spec["degrees"]
    if len(degs) == 1:
        return f"Y^{n}_{degs[0]}"
    return f"Y^{n}_{{{','.join(map(str, degs))}}}"


def render_text(payload: dict) -> str:
    kind = payload["kind"]
    if kind == "euler":
        return f"chi({_spec_label(payload['spec'])}) = {payload['value']}"
    if kind == "chi_y":
        coeffs = [_parse_frac(c) for c in payload["coefficients"]]
        pairs = [(2 * i, c) for i, c in enumerate(coeffs) if c]
        return f"chi_y({_spec_label(payload['spec'])}) = {laurent_latex(pairs)}"
    if kind in ("elliptic", "ns_elliptic"):
        # no smoothness is checked anywhere: the residue formula defines the
        # genus for arbitrary (virtual) intersection data
        lines = [
            f"virtual {'NS ' if kind == 'ns_elliptic' else ''}elliptic genus of "
            f"{_spec_label(payload['spec'])} (q-order {payload['q_order']})"
        ]
        pf = payload.get("prefactor", {})
        if pf.get("i_pow") or pf.get("q8_pow"):
            lines.append(f"prefactor: (i q^(1/8))^{pf['q8_pow']}")
        if not payload["coefficients"]:
            lines.append("  0")
        for ue, pairs in payload["coefficients"]:
            body = laurent_latex([(int(e), _parse_frac(f)) for e, f in pairs])
            lines.append(f"  {_q_power_str(ue) if ue else '1'}: {body}")
        for w in payload.get("warnings", ()):
            lines.append(f"warning: {w}")
        return "\n".join(lines)
    if kind == "witten":
        v = payload["value"]
        lines = [
            f"sigma_{payload['sigma_k']}(L{_spec_label(payload['spec'])}) at "
            f"tau = {payload['tau'][0]}+{payload['tau'][1]}i: {v[0]:.12g}{v[1]:+.12g}i"
        ]
        for ue, re, im in payload["exact_coefficients"]:
            gauss = re if im == "0" else f"{re}+{im}i"
            lines.append(f"  {_q_power_str(ue) if ue else '1'}: {gauss}")
        return "\n".join(lines)
    if kind == "genseries":
        lines = [f"{payload['series_kind']} generating series, degrees {payload['degrees']}"]
        for te, rows in payload["coefficients"]:
            if payload["series_kind"] == "elliptic":
                inner = "; ".join(
                    f"{_q_power_str(ue) if ue else '1'}: "
                    + laurent_latex([(int(e), _parse_frac(f)) for e, f in pairs])
                    for ue, pairs in rows
                )
            else:
                inner = "; ".join(
                    laurent_latex([(int(e), _parse_frac(f)) for e, f in pairs])
                    for _, pairs in rows
                ) or "0"
            lines.append(f"  t^{te}: {inner}")
        return "\n".join(lines)
    if kind == "lgcheck":
        g, l = payload["geometric_value"], payload["lg_value"]
        lines = [
            f"correspondence check ({payload['check_kind']}) for {_spec_label(payload['spec'])}",
            f"  geometric = {g[0]:.12g}{g[1]:+.12g}i",
            f"  lg sum    = {l[0]:.12g}{l[1]:+.12g}i",
            f"  abs diff  = {payload['abs_diff']:.3e}",
            f"  rel diff  = {payload['rel_diff']:.3e}",
            f"  q order   = {payload['q_order_used']}"
            f" (truncation bound {payload['truncation_bound']:.3e})",
            f"  preconditions: "
            + ", ".join(f"{name}={'ok' if ok else 'FAIL'}" for name, ok in payload["preconditions"]),
            f"  passed: {payload['passed']} (tol {payload['tol']:g})",
        ]
        return "\n".join(lines)
    if kind == "selftest":
        lines = [
            f"{'ok  ' if ok else 'FAIL'} {name}{(': ' + detail) if detail else ''}"
            for name, ok, detail in payload["checks"]
        ]
        lines.append("selftest " + ("passed" if payload["passed"] else "FAILED"))
        return "\n".join(lines)
    raise DomainError(f"cannot render payload of kind {kind!r}")


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if fmt == "latex":
        kind = payload["kind"]
        if kind in ("elliptic", "ns_elliptic"):
            return genus_latex(payload)
        if kind == "chi_y":
            coeffs = [_parse_frac(c) for c in payload["coefficients"]]
            return laurent_latex([(2 * i, c) for i, c in enumerate(coeffs) if c]) or "0"
        if kind == "euler":
            return str(payload["value"])
        return render_text(payload)
    if fmt == "text":
        return render_text(payload)
    raise DomainError(f"unknown output format {fmt!r}")
