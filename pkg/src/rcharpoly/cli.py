"""Command-line interface.

Exit codes: 0 success, 1 identity or certification failure, 2 input error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .barrier import (
    THRESHOLDS,
    bivariate_counterexample_json,
    closed_form_bound,
    conjectured_bound,
    diagonal_bound_numeric,
    root_bound,
    statement_counterexample_search,
)
from .errors import SizeLimitError
from .linalg import EXACT, FLOAT, Matrix, det, matrix_from_json
from .paving import best_paving_exhaustive, best_paving_greedy, paving_charpoly_sum
from .poly import is_real_rooted, real_roots
from .rdet import (
    DERIVATIVE_LIMIT,
    MACMAHON_LIMIT,
    PERM_LIMIT,
    chi_r,
    det_r_derivative,
    det_r_macmahon,
    det_r_perm,
    is_integer_r,
)
from .scalars import GaussianRational
from .stability import paving_measure, sr_measure_from_matrix
from .verify import CHECK_NAMES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, (int, Fraction, GaussianRational)):
        return str(v)
    if isinstance(v, complex):
        return repr(v.real) if v.imag == 0 else repr(v)
    return repr(float(v))


def _parse_r(text: str, mode: str):
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad value for --r: {text!r}") from None
    if r < 1:
        raise InputError("--r must be at least 1")
    if r.denominator == 1:
        return int(r)
    return r if mode == EXACT else float(r)


def _load_matrix(path: str | None, mode: str | None) -> Matrix:
    if path is None:
        raise InputError("--matrix is required for this command")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg}") from None
    try:
        A = matrix_from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(str(exc)) from None
    if mode == FLOAT and A.mode == EXACT:
        A = A.as_float()
    elif mode == EXACT and A.mode == FLOAT:
        raise InputError("a float matrix file cannot be used in exact mode")
    return A


# ---------------------------------------------------------------------------
# commands


def cmd_detr(args) -> tuple[int, dict]:
    A = _load_matrix(args.matrix, args.mode)
    r = _parse_r(args.r, A.mode)
    results, skipped = [], []
    n = A.n
    if n <= PERM_LIMIT:
        results.append(("perm-cycle", det_r_perm(A, r)))
    else:
        skipped.append({"method": "perm-cycle", "reason": f"needs n <= {PERM_LIMIT}"})
    if not is_integer_r(r):
        skipped.append({"method": "derivative", "reason": "needs a positive integer r"})
    elif n > DERIVATIVE_LIMIT[0] or r > DERIVATIVE_LIMIT[1]:
        skipped.append({"method": "derivative",
                        "reason": f"needs n <= {DERIVATIVE_LIMIT[0]} and r <= {DERIVATIVE_LIMIT[1]}"})
    else:
        results.append(("derivative", det_r_derivative(A, r)))
    if n <= MACMAHON_LIMIT:
        results.append(("macmahon", det_r_macmahon(A, r)))
    else:
        skipped.append({"method": "macmahon", "reason": f"needs n <= {MACMAHON_LIMIT}"})
    if r == 1:
        results.append(("det", det(A)))
    if not results:
        raise SizeLimitError("no det_r method applies at this size")
    vals = [v for _, v in results]
    if A.mode == EXACT:
        agree = all(v == vals[0] for v in vals)
    else:
        scale = max(1.0, max(abs(complex(v)) for v in vals))
        agree = all(abs(complex(v) - complex(vals[0])) <= args.tolerance * scale for v in vals)
    out = {"command": "detr", "n": n, "r": _fmt(r), "mode": A.mode, "value": _fmt(vals[0]),
           "results": [{"method": m, "value": _fmt(v)} for m, v in results],
           "skipped": skipped, "agreement": agree}
    return (EXIT_OK if agree else EXIT_FAIL), out


def cmd_chir(args) -> tuple[int, dict]:
    A = _load_matrix(args.matrix, args.mode)
    r = _parse_r(args.r, A.mode)
    p = chi_r(A, r)
    roots = real_roots(p)
    out = {"command": "chir", "n": A.n, "r": _fmt(r), "mode": A.mode, "chi_r": p.to_json(),
           "real_rooted": is_real_rooted(p),
           "real_roots": [{"root": x, "multiplicity": m} for x, m in roots],
           "max_root": roots[-1][0] if roots else None}
    return EXIT_OK, out


def cmd_pavings(args) -> tuple[int, dict]:
    A = _load_matrix(args.matrix, args.mode)
    r = _parse_r(args.r, A.mode)
    if not is_integer_r(r):
        raise InputError("pavings need an integer r")
    total = paving_charpoly_sum(A, r, budget=args.budget)
    chi = chi_r(A, r)
    if A.mode == EXACT:
        equal = total == chi
    else:
        equal = (total - chi).max_abs_coeff() <= args.tolerance * max(1.0, chi.max_abs_coeff())
    out = {"command": "pavings", "n": A.n, "r": r, "count": r ** A.n, "paving_sum": total.to_json(),
           "chi_r": chi.to_json(), "equal": equal}
    return (EXIT_OK if equal else EXIT_FAIL), out


def cmd_bound(args) -> tuple[int, dict]:
    r = _parse_r(args.r, FLOAT)
    if not is_integer_r(r) or r < 2:
        raise InputError("bounds need an integer r >= 2")
    out = {"command": "bound", "r": r}
    code = EXIT_OK
    if args.delta is None and args.matrix is None:
        raise InputError("give --delta or --matrix")
    if args.delta is not None:
        d = args.delta
        if not 0 <= d <= 1:
            raise InputError("--delta must lie in [0, 1]")
        entry = {"delta": d}
        if r in THRESHOLDS:
            entry["closed_form"] = closed_form_bound(d, r)
            entry["clamped"] = d > THRESHOLDS[r]
            if entry["clamped"]:
                entry["warning"] = f"delta above {float(THRESHOLDS[r])}; the bound is the trivial value 1"
        b_star, value = diagonal_bound_numeric(d, r)
        entry["numeric"] = {"b_star": b_star, "bound": value}
        entry["conjectures"] = conjectured_bound(d, r)
        out["diagonal"] = entry
    if args.matrix is not None:
        A = _load_matrix(args.matrix, args.mode)
        rep = root_bound(A, r, certify=args.certify)
        out["matrix"] = rep.to_json()
        if args.certify and rep.certified_max_root is not None \
                and rep.certified_max_root > rep.bound + 1e-8:
            code = EXIT_FAIL
    return code, out


def cmd_verify(args) -> tuple[int, dict]:
    if args.fault is not None and args.fault not in CHECK_NAMES:
        raise InputError(f"unknown fault {args.fault!r}; choose from {', '.join(CHECK_NAMES)}")
    rep = run_suite(args.seed, args.mode or EXACT, args.tolerance, args.threads, args.fault)
    out = {"command": "verify"}
    out.update(rep.to_json())
    return (EXIT_OK if rep.passed else EXIT_FAIL), out


def cmd_search(args) -> tuple[int, dict]:
    if args.budget < 1:
        raise InputError("--budget must be at least 1")
    if args.target == "statement":
        n = args.n or 4
        rep = statement_counterexample_search(n, args.budget, args.seed, args.threads)
        out = {"command": "search", "target": "statement"}
        out.update(rep.to_json())
        return EXIT_OK, out
    if args.target == "bivariate":
        out = {"command": "search", "target": "bivariate"}
        out.update(bivariate_counterexample_json())
        return EXIT_OK, out
    A = _load_matrix(args.matrix, args.mode)
    r = _parse_r(args.r, A.mode)
    if not is_integer_r(r):
        raise InputError("pavings need an integer r")
    if args.greedy:
        rep = best_paving_greedy(A, r, args.seed)
        method = "greedy"
    else:
        rep = best_paving_exhaustive(A, r, certify=args.certify, budget=args.budget)
        method = "exhaustive"
    out = {"command": "search", "target": "paving", "method": method, "r": r}
    out.update(rep.to_json())
    return EXIT_OK, out


def cmd_stability(args) -> tuple[int, dict]:
    trials = min(args.budget, 10 ** 6)
    if args.paving_measure:
        if args.n is None:
            raise InputError("--paving-measure needs --n")
        r = _parse_r(args.r, EXACT)
        mu = paving_measure(args.n, int(r))
        out = {"command": "stability", "measure": "paving"}
        out.update(mu.to_json())
        return EXIT_OK, out
    A = _load_matrix(args.matrix, args.mode)
    r = _parse_r(args.r, A.mode)
    if not is_integer_r(r):
        raise InputError("the measure needs an integer r")
    mu = sr_measure_from_matrix(A, int(r), trials=trials, seed=args.seed, threads=args.threads)
    out = {"command": "stability", "measure": "r-determinant", "r": int(r)}
    out.update(mu.to_json())
    return EXIT_OK, out


COMMANDS = {"detr": cmd_detr, "chir": cmd_chir, "pavings": cmd_pavings, "bound": cmd_bound,
            "verify": cmd_verify, "search": cmd_search, "stability": cmd_stability}


# ---------------------------------------------------------------------------
# output


def _flatten(prefix: str, v, rows: list):
    if isinstance(v, dict):
        for k, x in v.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), x, rows)
    elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
        for i, x in enumerate(v):
            _flatten(f"{prefix}[{i}]", x, rows)
    else:
        rows.append((prefix, json.dumps(v) if isinstance(v, list) else v))


def to_csv(out: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if out.get("command") == "verify":
        w.writerow(["check", "tag", "passed", "instances", "failure"])
        for c in out["checks"]:
            w.writerow([c["name"], c["tag"], c["passed"], c["instances"],
                        json.dumps(c["failure"], sort_keys=True) if c["failure"] else ""])
        return buf.getvalue()
    w.writerow(["key", "value"])
    rows: list = []
    _flatten("", out, rows)
    for k, v in rows:
        w.writerow([k, v])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--matrix", metavar="PATH", help="matrix JSON file")
    common.add_argument("--r", default="2", help="the parameter r (rational allowed, e.g. 3/2)")
    common.add_argument("--mode", choices=[EXACT, FLOAT], default=None,
                        help="arithmetic mode (default: the matrix file's mode)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=100_000)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--tolerance", type=float, default=1e-9)
    common.add_argument("--output", choices=["json", "csv"], default="json")
    common.add_argument("--certify", action="store_true", help="compare bounds with max root of chi_r")

    parser = argparse.ArgumentParser(prog="rcharpoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("detr", parents=[common], help="det_r by every applicable method")
    sub.add_parser("chir", parents=[common], help="r-characteristic polynomial and its roots")
    sub.add_parser("pavings", parents=[common], help="sum of pinched charpolys over all pavings")
    p = sub.add_parser("bound", parents=[common], help="barrier root bounds")
    p.add_argument("--delta", type=float, default=None, help="diagonal bound of a positive contraction")
    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--fault", default=None, help="perturb one check (harness self-test)")
    p = sub.add_parser("search", parents=[common], help="counterexample and paving searches")
    p.add_argument("target", choices=["statement", "paving", "bivariate"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--greedy", action="store_true")
    p = sub.add_parser("stability", parents=[common], help="measures and stability verdicts")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--paving-measure", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.tolerance <= 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        code, out = COMMANDS[args.command](args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output == "csv":
        sys.stdout.write(to_csv(out))
    else:
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
