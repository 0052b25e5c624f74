"""Command-line driver: tables, reports and invariant checks.

Every output carries the tool version, the full configuration and the seed,
as '# ' comment lines in CSV files and as top-level fields in JSON files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, bounds
from .estimator import EstimateConfig, estimate
from .multiindex import BallSpec, MultiIndex, SparsePolynomial
from .randpoly import (
    draw_sign_tensor,
    implied_upper_bound,
    sup_norm_estimate,
    to_homogeneous,
)
from .univariate import (
    HypothesisViolation,
    UnivariateSeries,
    bohr_radius_1d,
    caratheodory_check,
    cauchy_derivative_bound,
    check_bounded,
    h2_norm,
    moebius_coeffs,
    wiener_average,
    wintner_argmin,
    wintner_h2_bound,
    wintner_objective,
)
from .verify import SUITES, run_suites

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2
SIG_DIGITS = 12


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ parsing

def parse_int_range(text: str) -> list[int]:
    """'A:B' or 'A..B', both ends included."""
    sep = ":" if ":" in text else ".." if ".." in text else None
    try:
        if sep is None:
            return [int(text)]
        a, b = (int(t) for t in text.split(sep))
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected A:B")
    if b < a:
        raise UsageError(f"empty range {text!r}")
    return list(range(a, b + 1))


def parse_p(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return math.inf
    try:
        p = float(t)
    except ValueError:
        raise UsageError(f"bad p value {text!r}")
    if not p >= 1.0:
        raise UsageError(f"p must be >= 1, got {text!r}")
    return p


def parse_p_list(text: str) -> list[float]:
    return [parse_p(t) for t in text.split(",") if t.strip()]


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}")


def _load_json_arg(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}")


def parse_series(text: str) -> UnivariateSeries:
    """JSON array of numbers or [re, im] pairs; '@file' reads the array from a file."""
    data = _load_json_arg(text)
    if not isinstance(data, list) or not data:
        raise UsageError("series must be a non-empty JSON array")
    coeffs = []
    for v in data:
        if isinstance(v, (int, float)):
            coeffs.append(complex(v))
        elif isinstance(v, list) and len(v) == 2:
            coeffs.append(complex(v[0], v[1]))
        else:
            raise UsageError(f"bad coefficient {v!r}")
    return UnivariateSeries.of(coeffs)


def _series_from_args(args) -> tuple[UnivariateSeries, dict]:
    if args.coeffs is not None:
        s = parse_series(args.coeffs)
        return s, {"coeffs": args.coeffs}
    if args.a is None:
        raise UsageError("give --a or --coeffs")
    if not 0.0 <= args.a < 1.0:
        raise UsageError("--a must lie in [0, 1)")
    return moebius_coeffs(args.a, args.K), {"a": args.a, "K": args.K}


# ------------------------------------------------------------------ output

def fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def _header(command: str, config: dict, seed: int) -> dict:
    return {"tool": "bohrlab", "version": __version__, "command": command, "seed": seed, "config": config}


def _json_safe(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    return obj


def render_csv(header: dict, columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# bohrlab {header['version']} {header['command']}\n")
    buf.write(f"# seed: {header['seed']}\n")
    buf.write("# config: " + json.dumps(_json_safe(header["config"]), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def render_json(header: dict, body: dict) -> str:
    return json.dumps(_json_safe({**header, **body}), indent=2) + "\n"


def emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def read_csv_rows(path: str) -> list[dict]:
    """Rows of a CSV written by this tool, skipping the '# ' header."""
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def _p_json(p: float) -> str | float:
    return "inf" if math.isinf(p) else p


# ------------------------------------------------------------------ commands

BOUND_COLUMNS = ["n", "p", "lower_K", "upper_K", "stir_K", "d_K", "lower_B", "upper_B", "stir_B", "d_B"]


def cmd_bounds(args) -> int:
    ns = parse_int_range(args.n_range)
    ps = parse_p_list(args.p)
    if ns[0] < 2:
        raise UsageError("the bound table needs n >= 2")
    if not ps:
        raise UsageError("--p is empty")
    rows = []
    for n in ns:
        for p in ps:
            r = bounds.bound_report(BallSpec(n, p))
            rows.append({
                "n": n, "p": BallSpec(n, p).p_label(),
                "lower_K": r.lower_K, "upper_K": r.upper_K, "stir_K": r.stir_K, "d_K": r.d_used_K,
                "lower_B": r.lower_B, "upper_B": r.upper_B, "stir_B": r.stir_B, "d_B": r.d_used_B,
            })
    config = {"n_range": args.n_range, "p": [_p_json(p) for p in ps]}
    header = _header("bounds", config, args.seed)
    if args.format == "json":
        emit(render_json(header, {"columns": BOUND_COLUMNS, "rows": rows}), args.out)
    else:
        emit(render_csv(header, BOUND_COLUMNS, rows), args.out)
    return EXIT_OK


def cmd_wintner(args) -> int:
    s, cfg = _series_from_args(args)
    h2 = h2_norm(s)
    if h2 > 1.0 + 1e-12:
        raise UsageError(f"series has H2 norm {h2:.6g} > 1")
    c0 = abs(s.coeffs[0])
    result = {
        "objective": wintner_objective(s),
        "argmin_r": wintner_argmin(s),
        "h2_norm": h2,
        "h2_bound": wintner_h2_bound(min(c0, 1.0)),
        "c0_modulus": c0,
    }
    _emit_result("wintner", cfg, args, result)
    return EXIT_OK


def cmd_bohr1d(args) -> int:
    s, cfg = _series_from_args(args)
    try:
        sup = check_bounded(s)
    except HypothesisViolation as exc:
        raise UsageError(str(exc))
    result = {"radius": bohr_radius_1d(s), "sampled_sup": sup}
    if "a" in cfg:
        result["closed_form"] = 1.0 / (1.0 + 2.0 * cfg["a"])
    _emit_result("bohr1d", cfg, args, result)
    return EXIT_OK


def cmd_caratheodory(args) -> int:
    s, cfg = _series_from_args(args)
    res = caratheodory_check(s)
    _emit_result("caratheodory", cfg, args, asdict(res))
    return EXIT_OK if res.passes else EXIT_INVARIANT


def cmd_wiener(args) -> int:
    data = _load_json_arg(args.poly)
    try:
        poly = SparsePolynomial.from_dict(data)
        alpha = MultiIndex(tuple(parse_int_list(args.alpha)))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad polynomial or multi-index: {exc}")
    cfg = {"poly": data, "alpha": list(alpha)}
    if args.bound_b is not None:
        b = args.bound_b
        cfg["bound_b"] = b
    else:
        ball = BallSpec(poly.dim, parse_p(args.p))
        b = cauchy_derivative_bound(alpha, ball)
        cfg["p"] = ball.p_label()
    try:
        res = wiener_average(poly, alpha, b)
    except ValueError as exc:
        raise UsageError(str(exc))
    result = {"averaged": res.averaged.to_dict(), "coefficient_bound": res.coefficient_bound,
              "bound_b": b, "removed_terms": len(poly) - len(res.averaged)}
    _emit_result("wiener", cfg, args, result)
    return EXIT_OK


def cmd_tree(args) -> int:
    sol = bounds.tree_solve()
    result = {
        "closed_form": sol.closed_form,
        "newton": sol.newton,
        "abs_difference": abs(sol.closed_form - sol.newton),
        "series_residual": sol.series_residual,
        "tree_value": sol.tree_value,
        "newton_iterations": sol.newton_iterations,
    }
    _emit_result("tree", {}, args, result)
    return EXIT_OK


RANDOM_COLUMNS = [
    "seed", "lower_est", "upper_cert", "final_prob_bound", "random_bound",
    "implied_r_first_certified", "implied_r_first_empirical", "implied_r_second",
    "below_final_prob_bound", "budget_used",
]


def cmd_random_poly(args) -> int:
    p = parse_p(args.p)
    seeds = parse_int_range(args.seeds)
    if args.n < 2 or args.d < 2:
        raise UsageError("need --n >= 2 and --d >= 2")
    if args.budget < 1:
        raise UsageError("--budget must be positive")
    ball = BallSpec(args.n, p)
    fpb = bounds.final_prob_bound(args.n, args.d, p)
    rb = bounds.random_bound(args.n, args.d, p)

    def one(s: int) -> dict:
        P = to_homogeneous(draw_sign_tensor(args.n, args.d, s))
        est = sup_norm_estimate(P, ball, args.budget, s ^ args.seed)
        return {
            "seed": s,
            "lower_est": est.lower_est,
            "upper_cert": est.upper_cert,
            "final_prob_bound": fpb,
            "random_bound": rb,
            "implied_r_first_certified": implied_upper_bound(P, ball, "first", est.upper_cert),
            "implied_r_first_empirical": implied_upper_bound(P, ball, "first", est.lower_est),
            "implied_r_second": implied_upper_bound(P, ball, "second", est.lower_est),
            "below_final_prob_bound": bool(est.lower_est <= fpb),
            "budget_used": est.budget_used,
        }

    rows = _map(one, seeds, args.threads)
    hits = [r["seed"] for r in rows if r["below_final_prob_bound"]]
    summary = {
        "rows": len(rows),
        "below_final_prob_bound": len(hits),
        # seeds drawn before the first one whose sampled sup met the bound
        "redraws": seeds.index(hits[0]) if hits else None,
        "first_good_seed": hits[0] if hits else None,
    }
    cfg = {"n": args.n, "d": args.d, "p": _p_json(p), "seeds": args.seeds, "budget": args.budget}
    header = _header("random-poly", cfg, args.seed)
    if args.format == "csv":
        emit(render_csv(header, RANDOM_COLUMNS, rows), args.out)
    else:
        emit(render_json(header, {"summary": summary, "columns": RANDOM_COLUMNS, "rows": rows}), args.out)
    return EXIT_OK


CANDIDATE_COLUMNS = [
    "name", "family", "degree", "seed", "terms", "lower_est", "upper_cert", "gap", "budget_used",
    "r_first_empirical", "r_second_empirical", "r_first_certified", "r_second_certified",
]


def cmd_estimate(args) -> int:
    p = parse_p(args.p)
    degrees = tuple(parse_int_list(args.degrees)) if args.degrees else ()
    seeds = tuple(parse_int_range(args.seeds)) if args.seeds else ()
    config = EstimateConfig(
        degrees=degrees, seeds=seeds, budget=args.budget,
        include_moebius_products=args.moebius, seed=args.seed,
    )
    ball = BallSpec(args.n, p)
    try:
        report = estimate(ball, config, threads=args.threads)
    except ValueError as exc:
        raise UsageError(str(exc))
    cfg = {**asdict(config), "n": args.n, "p": _p_json(p)}
    header = _header("estimate", cfg, args.seed)
    body = report.to_dict()
    emit(render_json(header, body), args.out)
    csv_path = args.csv
    if csv_path is None and args.out not in (None, "-"):
        csv_path = str(Path(args.out).with_suffix("")) + "_candidates.csv"
    if csv_path:
        Path(csv_path).write_text(render_csv(header, CANDIDATE_COLUMNS, [asdict(c) for c in report.candidates]))
    return EXIT_OK


def cmd_verify(args) -> int:
    only = [s for t in (args.only or []) for s in t.split(",") if s]
    try:
        checks = run_suites(only or None, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    failed = [c for c in checks if not c.passed]
    body = {"passed": not failed, "total": len(checks), "failed": len(failed),
            "checks": [c.as_dict() for c in checks]}
    if args.format == "json":
        emit(render_json(_header("verify", {"only": only}, args.seed), body), args.out)
    else:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.suite}: {c.name}  {c.detail}".rstrip() for c in checks]
        lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_INVARIANT if failed else EXIT_OK


def _emit_result(command: str, cfg: dict, args, result: dict):
    header = _header(command, cfg, args.seed)
    if args.format == "csv":
        emit(render_csv(header, list(result), [result]), args.out)
    else:
        emit(render_json(header, {"result": result}), args.out)


def _map(fn, items, threads: int):
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ------------------------------------------------------------------ parser

def default_seed() -> int:
    raw = os.environ.get("BOHRLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"BOHRLAB_SEED must be an integer, got {raw!r}")


def build_parser(seed_default: int = 0) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=seed_default,
                        help="global seed (default: $BOHRLAB_SEED or 0)")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads; results do not depend on it")

    parser = argparse.ArgumentParser(prog="bohrlab", description="Bohr radius and majorant series experiments.")
    parser.add_argument("--version", action="version", version=f"bohrlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="table of the closed-form radius bounds")
    p.add_argument("--n-range", required=True, help="A:B, both ends included, A >= 2")
    p.add_argument("--p", default="1,2,inf", help="comma separated p values, 'inf' allowed")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bounds)

    def series_args(q):
        q.add_argument("--a", type=float, default=None, help="Moebius parameter a in [0, 1)")
        q.add_argument("--K", type=int, default=300, help="truncation order for --a")
        q.add_argument("--coeffs", default=None,
                       help="JSON coefficient array (numbers or [re, im] pairs), or @file")
        q.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("wintner", parents=[common], help="inf over r of Mf(r)/r and its H2 bound")
    series_args(p)
    p.set_defaults(func=cmd_wintner)

    p = sub.add_parser("bohr1d", parents=[common], help="one-variable Bohr radius of a series")
    series_args(p)
    p.set_defaults(func=cmd_bohr1d)

    p = sub.add_parser("caratheodory", parents=[common], help="check |c_k| <= 2(1 - |c_0|); exit 1 on failure")
    series_args(p)
    p.set_defaults(func=cmd_caratheodory)

    p = sub.add_parser("wiener", parents=[common], help="root-of-unity averaging and coefficient bound")
    p.add_argument("--poly", required=True, help='JSON {"dim", "terms": [{"alpha", "re", "im"}]} or @file')
    p.add_argument("--alpha", required=True, help="comma separated multi-index")
    p.add_argument("--bound-b", type=float, default=None,
                   help="derivative bound b; default is the Cauchy bound on the --p ball")
    p.add_argument("--p", default="inf", help="ball exponent for the default bound")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_wiener)

    p = sub.add_parser("tree", parents=[common], help="solve sum k^k/k! x^k = 1/2")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("random-poly", parents=[common], help="random +-multinomial polynomials vs the bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", default="inf")
    p.add_argument("--seeds", default="0:19", help="S0:S1, both ends included")
    p.add_argument("--budget", type=int, default=200_000, help="evaluations per sup estimate")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_random_poly)

    p = sub.add_parser("estimate", parents=[common], help="empirical Bohr radius brackets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", default="inf")
    p.add_argument("--degrees", default="2,3,4")
    p.add_argument("--seeds", default="0:9", help="S0:S1, both ends included")
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--moebius", action=argparse.BooleanOptionalAction, default=True,
                   help="include Moebius factors and their products")
    p.add_argument("--csv", default=None, help="per-candidate CSV (default: next to --out)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("--only", action="append", metavar="SUITE",
                   help=f"suite(s) to run, repeatable or comma separated: {', '.join(SUITES)}")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser(default_seed())
    except UsageError as exc:
        print(f"bohrlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if getattr(args, "threads", 1) < 1:
        print("bohrlab: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"bohrlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
