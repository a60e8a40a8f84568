"""Command-line front door.

Every subcommand is a thin client over the core package (or, with --server,
over a running ellgen HTTP service): parse flags, run one computation, render
the canonical payload as text, json or latex.

Exit codes: 0 success; 1 a check ran but failed (lgcheck beyond tolerance,
selftest failure); 2 domain/precondition errors; 3 truncation-budget errors.
JSON output is byte-deterministic for a fixed job.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
import warnings
from fractions import Fraction

from .emit import (
    chi_y_payload,
    euler_payload,
    genseries_payload,
    genus_payload,
    render,
    report_payload,
    selftest_payload,
    witten_payload,
)
from .errors import EllgenError, TruncationError
from .genera import (
    CISpec,
    chi_y_generating_series,
    chi_y_genus,
    elliptic_genus,
    elliptic_genus_generating_series,
    euler_generating_series,
    euler_number,
    ns_elliptic_genus,
    witten_genus,
    y_polynomial_coeffs,
)
from .lgside import LGParams, check_correspondence
from .selftest import run_selftest

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_DOMAIN = 2
EXIT_TRUNCATION = 3


def parse_real(text: str) -> float:
    """A real number given as a float ('0.3') or an exact rational ('3/10')."""
    text = text.strip()
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def parse_complex_pair(text: str) -> tuple[float, float]:
    """'re,im' or a single real part; each side may be a p/q rational."""
    parts = text.split(",")
    if len(parts) == 1:
        return parse_real(parts[0]), 0.0
    if len(parts) == 2:
        return parse_real(parts[0]), parse_real(parts[1])
    raise argparse.ArgumentTypeError(f"cannot parse complex value {text!r}")


def parse_degrees(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad degree list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ellgen",
        description="Exact genera of complete intersections and LG orbifold cross-checks.",
    )
    top.add_argument(
        "--server",
        metavar="URL",
        help="send the job to a running ellgen service instead of computing in-process",
    )
    sub = top.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "latex"), default="text")

    spec_args = argparse.ArgumentParser(add_help=False)
    spec_args.add_argument("--n", type=int, required=True, help="ambient CP^(N-1)")
    spec_args.add_argument(
        "--degrees", type=parse_degrees, required=True, help="comma-separated degrees"
    )

    p = sub.add_parser("euler", parents=[spec_args, common], help="Euler characteristic")
    p = sub.add_parser("chiy", parents=[spec_args, common], help="chi_y genus")
    p = sub.add_parser("ellgenus", parents=[spec_args, common], help="elliptic genus")
    p.add_argument("--q-order", type=int, default=8)
    p = sub.add_parser("nsgenus", parents=[spec_args, common], help="NS elliptic genus")
    p.add_argument("--q-order", type=int, default=8)

    p = sub.add_parser("witten", parents=[spec_args, common], help="Witten genera sigma_1..3")
    p.add_argument("--sigma-k", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--q-order", type=int, default=8)
    p.add_argument("--tau", type=parse_complex_pair, default=(0.0, 1.5), help="'re,im'")

    p = sub.add_parser("genseries", parents=[common], help="generating series in t")
    p.add_argument("--kind", choices=("euler", "chiy", "elliptic"), required=True)
    p.add_argument("--degrees", type=parse_degrees, required=True)
    p.add_argument("--t-order", type=int, default=8)
    p.add_argument("--q-order", type=int, default=8)

    p = sub.add_parser(
        "lgcheck", parents=[spec_args, common], help="geometric vs Landau-Ginzburg check"
    )
    p.add_argument(
        "--kind",
        choices=("elliptic", "ns", "sigma1", "sigma2", "sigma3"),
        default="elliptic",
    )
    p.add_argument("--v", type=parse_complex_pair, default=(0.0, 0.0), help="'re,im' or 'p/q'")
    p.add_argument("--tau", type=parse_complex_pair, default=(0.0, 1.5))
    p.add_argument("--q-order", type=int, default=16)
    p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("selftest", parents=[common], help="run the invariant suite")

    p = sub.add_parser("batch", parents=[common], help="run a JSON list of jobs in order")
    p.add_argument("--jobs", required=True, help="path to a JSON array of job objects")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return top


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


def _job_fields(args: argparse.Namespace) -> dict:
    """The wire form of a job (matches the service request models)."""
    cmd = args.command
    job: dict = {}
    if cmd in ("euler", "chiy", "ellgenus", "nsgenus", "witten", "lgcheck"):
        job["n"] = args.n
        job["degrees"] = args.degrees
    if cmd in ("ellgenus", "nsgenus", "witten", "genseries", "lgcheck"):
        job["q_order"] = args.q_order
    if cmd == "witten":
        job["sigma_k"] = args.sigma_k
        job["tau_re"], job["tau_im"] = args.tau
    if cmd == "genseries":
        job["series_kind"] = args.kind
        job["degrees"] = args.degrees
        job["t_order"] = args.t_order
    if cmd == "lgcheck":
        job["check_kind"] = args.kind
        job["v_re"], job["v_im"] = args.v
        job["tau_re"], job["tau_im"] = args.tau
        job["tol"] = args.tol
    return job


_ENDPOINTS = {
    "euler": "/euler",
    "chiy": "/chiy",
    "ellgenus": "/ellgenus",
    "nsgenus": "/nsgenus",
    "witten": "/witten",
    "genseries": "/genseries",
    "lgcheck": "/lgcheck",
    "selftest": "/selftest",
}


def _execute_local(command: str, job: dict) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # parity warnings land in the payload instead
        if command == "euler":
            spec = CISpec(job["n"], job["degrees"])
            return euler_payload(spec, euler_number(spec))
        if command == "chiy":
            spec = CISpec(job["n"], job["degrees"])
            return chi_y_payload(spec, y_polynomial_coeffs(chi_y_genus(spec)))
        if command == "ellgenus":
            spec = CISpec(job["n"], job["degrees"])
            return genus_payload(elliptic_genus(spec, job["q_order"]))
        if command == "nsgenus":
            spec = CISpec(job["n"], job["degrees"])
            return genus_payload(ns_elliptic_genus(spec, job["q_order"]))
        if command == "witten":
            spec = CISpec(job["n"], job["degrees"])
            tau = complex(job["tau_re"], job["tau_im"])
            return witten_payload(witten_genus(job["sigma_k"], spec, job["q_order"], tau))
        if command == "genseries":
            kind = job["series_kind"]
            if kind == "euler":
                series = euler_generating_series(job["degrees"], job["t_order"])
                return genseries_payload(kind, job["degrees"], series, None)
            if kind == "chiy":
                series = chi_y_generating_series(job["degrees"], job["t_order"])
                return genseries_payload(kind, job["degrees"], series, None)
            series = elliptic_genus_generating_series(
                job["degrees"], job["t_order"], job["q_order"]
            )
            return genseries_payload(kind, job["degrees"], series, job["q_order"])
        if command == "lgcheck":
            spec = CISpec(job["n"], job["degrees"])
            params = LGParams(
                v=complex(job["v_re"], job["v_im"]),
                tau=complex(job["tau_re"], job["tau_im"]),
                tol=job["tol"],
            )
            report = check_correspondence(spec, params, job["q_order"], job["check_kind"])
            return report_payload(report, job["tol"])
        if command == "selftest":
            return selftest_payload(run_selftest())
    raise EllgenError(f"unknown command {command!r}")


def _execute_remote(server: str, command: str, job: dict) -> dict:
    url = server.rstrip("/") + _ENDPOINTS[command]
    data = json.dumps(job).encode()
    req = urllib.request.Request(url, data=data, headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return json.loads(resp.read().decode())
    except urllib.error.HTTPError as exc:
        body = exc.read().decode()
        try:
            detail = json.loads(body).get("detail", {})
        except json.JSONDecodeError:
            detail = {"type": "HTTPError", "message": body}
        if isinstance(detail, dict) and detail.get("type") == "TruncationError":
            raise TruncationError(detail.get("message", body))
        message = detail.get("message", body) if isinstance(detail, dict) else str(detail)
        raise EllgenError(message)


def _payload_exit_code(command: str, payload: dict) -> int:
    if command in ("lgcheck", "selftest") and not payload.get("passed", True):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def run_job(command: str, job: dict, server: str | None, fmt: str, out=None) -> int:
    if out is None:
        out = sys.stdout
    try:
        if server:
            payload = _execute_remote(server, command, job)
        else:
            payload = _execute_local(command, job)
    except TruncationError as exc:
        print(_error_text(fmt, "TruncationError", str(exc)), file=out)
        return EXIT_TRUNCATION
    except EllgenError as exc:
        print(_error_text(fmt, type(exc).__name__, str(exc)), file=out)
        return EXIT_DOMAIN
    print(render(payload, fmt), file=out)
    return _payload_exit_code(command, payload)


def _error_text(fmt: str, err_type: str, message: str) -> str:
    if fmt == "json":
        return json.dumps(
            {"error": {"type": err_type, "message": message}},
            sort_keys=True,
            separators=(",", ":"),
        )
    return f"error ({err_type}): {message}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK
    if args.command == "batch":
        try:
            with open(args.jobs, "r", encoding="utf-8") as fh:
                jobs = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(_error_text(args.format, "BatchError", str(exc)))
            return EXIT_DOMAIN
        worst = EXIT_OK
        for entry in jobs:
            command = entry.pop("command")
            code = run_job(command, entry, args.server, args.format)
            worst = max(worst, code)
        return worst
    code = run_job(args.command, _job_fields(args), args.server, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
