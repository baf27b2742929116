"""Command-line front end.

Subcommands: normalize (Hamiltonian JSON in, normal-form report JSON out),
closed-form (tabulated coefficients from a/b/omega flags), rtbp-eval (model
coefficients plus stability verdict), rtbp-scan (determinant-vs-omega1 grid as
CSV or JSON).  Exit codes: 0 success, 2 usage error, 3 domain error,
4 resonance/pole error (machine-readable JSON on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys

from .closedform import CubicQuarticCoefficients, PoleError, d2_closed, k0022, k1111, k2200
from .normalform import ResonanceError, normalize
from .polyalg import Frequencies, GradedHamiltonian, REAL_CHART
from .rtbpmodel import (
    ModelParams,
    coefficients,
    scan_omega1,
    scan_threads_from_env,
    stability_verdict,
)

USAGE_ERROR = 2
DOMAIN_ERROR = 3
RESONANCE_ERROR = 4


def _fmt(v: float) -> str:
    # 17 significant digits; round-trips any double exactly
    return format(float(v), ".16e")


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _parse_grid(text: str) -> tuple[float, float, int]:
    pieces = text.split(":")
    if len(pieces) != 3:
        raise argparse.ArgumentTypeError("grid must look like lo:hi:steps")
    try:
        lo, hi, steps = float(pieces[0]), float(pieces[1]), int(pieces[2])
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {err}") from err
    return lo, hi, steps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="birkhoff",
        description="Degree-4 Birkhoff normal forms and the stability "
                    "determinant for the radiating oblate three-body model.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("normalize", help="normalize a Hamiltonian JSON file")
    p_norm.add_argument("--input", required=True, help="Hamiltonian JSON path")
    p_norm.add_argument("--order", type=int, default=2)
    p_norm.add_argument("--divisor-tolerance", type=float, default=None)
    p_norm.add_argument("--output", default=None)

    p_cf = sub.add_parser("closed-form", help="tabulated K coefficients and D2")
    for name in ("a1", "a2", "a3", "a4", "b1", "b3", "b5"):
        p_cf.add_argument(f"--{name}", type=float, default=0.0)
    p_cf.add_argument("--omega1", type=float, required=True)
    p_cf.add_argument("--omega3", type=float, required=True)
    p_cf.add_argument("--format", choices=("json", "csv"), default="json")
    p_cf.add_argument("--output", default=None)

    p_eval = sub.add_parser("rtbp-eval", help="model coefficients and stability verdict")
    p_eval.add_argument("--mu", type=float, required=True)
    p_eval.add_argument("--q", type=float, required=True)
    p_eval.add_argument("--Q", type=float, required=True)
    p_eval.add_argument("--A", type=float, required=True)
    p_eval.add_argument("--omega1", type=float, required=True)
    p_eval.add_argument("--omega3", type=float, default=1.0)
    p_eval.add_argument("--d2-tolerance", type=float, default=None)
    p_eval.add_argument("--max-half-order", type=int, default=None,
                        help="truncate the expansions after A**(h/2)")
    p_eval.add_argument("--output", default=None)

    p_scan = sub.add_parser("rtbp-scan", help="determinant over an omega1 grid")
    p_scan.add_argument("--mu", type=float, required=True)
    p_scan.add_argument("--q", type=float, required=True)
    p_scan.add_argument("--Q", type=float, required=True)
    p_scan.add_argument("--A", type=float, required=True)
    p_scan.add_argument("--omega3", type=float, default=1.0)
    p_scan.add_argument("--grid", type=_parse_grid, required=True,
                        metavar="LO:HI:STEPS")
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("--d2-tolerance", type=float, default=None)
    p_scan.add_argument("--max-half-order", type=int, default=None)
    p_scan.add_argument("--output", default=None)

    return parser


def _run_normalize(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    ham = GradedHamiltonian.from_json_dict(payload)
    if ham.chart == REAL_CHART:
        ham = ham.complexify()
    report = normalize(ham, order=args.order,
                       divisor_tolerance=args.divisor_tolerance)
    _emit(_json_text(report.to_json_dict()), args.output)
    return 0


def _run_closed_form(args) -> int:
    coeffs = CubicQuarticCoefficients(a1=args.a1, a2=args.a2, a3=args.a3,
                                      a4=args.a4, b1=args.b1, b3=args.b3,
                                      b5=args.b5)
    freqs = Frequencies(args.omega1, args.omega3)
    values = {
        "K2200": k2200(coeffs, freqs),
        "K1111": k1111(coeffs, freqs),
        "K0022": k0022(coeffs, freqs),
        "D2": d2_closed(coeffs, freqs),
    }
    if args.format == "csv":
        text = ("K2200,K1111,K0022,D2\n"
                + ",".join(_fmt(values[k]) for k in ("K2200", "K1111", "K0022", "D2")))
    else:
        text = _json_text(values)
    _emit(text, args.output)
    return 0


def _run_rtbp_eval(args) -> int:
    params = ModelParams(mu=args.mu, q=args.q, Q=args.Q, A=args.A)
    verdict = stability_verdict(params, args.omega1, args.omega3,
                                d2_tolerance=args.d2_tolerance,
                                max_half_order=args.max_half_order)
    coeffs = coefficients(params, args.max_half_order)
    payload = {
        "params": {"mu": params.mu, "q": params.q, "Q": params.Q, "A": params.A},
        "coefficients": {
            "a": coeffs.a, "c": coeffs.c,
            "a1": coeffs.a1, "a2": coeffs.a2, "a3": coeffs.a3, "a4": coeffs.a4,
            "b1": coeffs.b1, "b3": coeffs.b3, "b5": coeffs.b5,
        },
        "verdict": verdict.to_json_dict(),
    }
    _emit(_json_text(payload), args.output)
    return 0


def _run_rtbp_scan(args) -> int:
    params = ModelParams(mu=args.mu, q=args.q, Q=args.Q, A=args.A)
    lo, hi, steps = args.grid
    rows = scan_omega1(params, args.omega3, lo, hi, steps,
                       d2_tolerance=args.d2_tolerance,
                       max_half_order=args.max_half_order,
                       threads=scan_threads_from_env())
    if args.format == "csv":
        lines = ["omega1,D2,flag"]
        lines += [f"{_fmt(r.omega1)},{_fmt(r.d2)},{r.flag}" for r in rows]
        text = "\n".join(lines)
    else:
        text = _json_text([
            {"omega1": r.omega1, "D2": r.d2, "flag": r.flag} for r in rows])
    _emit(text, args.output)
    return 0


_HANDLERS = {
    "normalize": _run_normalize,
    "closed-form": _run_closed_form,
    "rtbp-eval": _run_rtbp_eval,
    "rtbp-scan": _run_rtbp_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ResonanceError as err:
        sys.stderr.write(_json_text({
            "error": "resonance",
            "message": str(err),
            "exponents": list(err.exponents),
            "divisor": err.divisor,
        }) + "\n")
        return RESONANCE_ERROR
    except PoleError as err:
        sys.stderr.write(_json_text({
            "error": "resonance",
            "message": str(err),
            "relation": err.relation,
        }) + "\n")
        return RESONANCE_ERROR
    except (ValueError, OSError, json.JSONDecodeError) as err:
        sys.stderr.write(_json_text({
            "error": "domain",
            "message": str(err),
        }) + "\n")
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
