"""heckesign command line: traces, a2 signs, certificates, theta checks and region searches."""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import certify as cert
from .checkpoint import CheckpointError
from .coeffs import sign_report
from .search import SearchRegion, classify_region, residual_region, write_csv, write_jsonl
from .trace import TraceIntegralityError, trace

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAULT = 2
EXIT_INTERRUPTED = 3

THREADS_ENV = "HECKESIGN_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _decimal(x: Fraction, places: int = 12) -> str:
    """Fixed-point rendering, never scientific."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{float(x):.{places}f}".rstrip("0")


def _exact(x) -> str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return str(x)


def _emit(record: dict, fmt: str, out) -> None:
    """Print one flat record as a table, a one-row CSV, or JSON."""
    if fmt == "json":
        out.write(json.dumps(record) + "\n")
    elif fmt == "csv":
        out.write(",".join(record) + "\n")
        out.write(",".join(str(v) for v in record.values()) + "\n")
    else:
        width = max(len(k) for k in record)
        for key, val in record.items():
            out.write(f"{key:<{width}}  {val}\n")


def _format(args) -> str:
    if args.format:
        return args.format
    return "table" if sys.stdout.isatty() else "csv"


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        raw = os.environ.get(THREADS_ENV)
        try:
            n = int(raw) if raw else 1
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 1:
        raise UsageError("thread count must be positive")
    return n


def cmd_trace(args, out) -> int:
    b = trace(args.m, args.N, args.k)
    rec = {"m": b.m, "N": b.N, "k": b.k, "trace": b.total}
    if args.breakdown:
        for name in ("a1", "a2", "a3", "a4"):
            rec[name.upper()] = _exact(getattr(b, name))
    _emit(rec, _format(args), out)
    return EXIT_OK


def cmd_a2(args, out) -> int:
    rep = sign_report(args.m, args.N, args.k)
    d = rep.as_dict()
    _emit(d, _format(args), out)
    return EXIT_OK


def cmd_certify(args, out) -> int:
    c = cert.certify_point(args.m, args.N, args.k)
    d = c.as_dict()
    if _format(args) == "table":
        d["main_term"] = f"{d['main_term']} (~{_decimal(c.main_term)})"
        d["error_bound"] = f"{d['error_bound']} (~{_decimal(c.error_bound)})"
    _emit(d, _format(args), out)
    return EXIT_OK


def cmd_theta(args, out) -> int:
    fmt = _format(args)
    if not args.verify_table:
        if args.N is None:
            raise UsageError("theta needs N or --verify-table")
        prof = cert.theta_profile(args.N)
        d = prof.as_dict()
        for key in ("theta1_approx", "theta2_approx", "theta3_approx"):
            d[key] = f"{d[key]:.12f}"
        _emit(d, fmt, out)
        return EXIT_OK
    reports = cert.verify_theta_table(args.cap, window=args.window, workers=_threads(args))
    tail = cert.analytic_tail_check()
    if fmt == "json":
        out.write(json.dumps({"rows": [r.as_dict() for r in reports],
                              "tail": {"passed": tail["passed"], "checks": tail["checks"]}}) + "\n")
    else:
        out.write("threshold,scanned_to,max_theta1,max_theta2,max_theta3,status\n")
        for r in reports:
            status = "skipped" if r.scanned_to == 0 else ("pass" if r.passed else "FAIL")
            d = r.as_dict()
            out.write(f"{r.threshold},{r.scanned_to},{d['max_theta1']:.9f},"
                      f"{d['max_theta2']:.9f},{d['max_theta3']:.9f},{status}\n")
        out.write(f"analytic tail,{cert.TAIL_START},,,,{'pass' if tail['passed'] else 'FAIL'}\n")
    ok = tail["passed"] and all(r.passed for r in reports)
    return EXIT_OK if ok else EXIT_FAULT


def cmd_search(args, out) -> int:
    if args.residual_region:
        if args.nmax is not None or args.kmax is not None:
            raise UsageError("--residual-region excludes --nmax/--kmax")
        region = residual_region(args.m)
    else:
        if args.nmax is None or args.kmax is None:
            raise UsageError("search needs --nmax and --kmax, or --residual-region")
        region = SearchRegion(args.m, args.nmin, args.nmax, args.kmin, args.kmax)
    threads = _threads(args)
    interrupted = False
    try:
        result = classify_region(
            region, args.mode, workers=threads, checkpoint=args.checkpoint,
            max_seconds=args.max_seconds,
        )
    except KeyboardInterrupt:
        interrupted = True
        result = None
    if interrupted or not result.complete:
        if args.checkpoint:
            sys.stderr.write(f"interrupted; progress saved in {args.checkpoint}, rerun to resume\n")
            return EXIT_INTERRUPTED
        sys.stderr.write("interrupted without a checkpoint; nothing saved\n")
        return 130 if interrupted else EXIT_INTERRUPTED
    fmt = args.format or ("csv" if args.out or not sys.stdout.isatty() else "table")
    buf = io.StringIO()
    if fmt == "json":
        write_jsonl(result.exceptional, buf)
    elif fmt == "csv":
        write_csv(result.exceptional, buf)
    else:
        buf.write(f"{'N':>9} {'k':>5} {'dim':>6}  a2\n")
        for r in result.exceptional:
            buf.write(f"{r.N:>9} {r.k:>5} {r.dim:>6}  {r.a2}\n")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    sys.stderr.write(json.dumps(result.summary()) + "\n")
    return EXIT_OK


def _selftest_checks(quick: bool) -> list[tuple[str, Callable[[], bool]]]:
    from . import oracles
    from .classnum import class_number
    from .coeffs import a2 as second_coeff
    from .coeffs import dimension
    from .congruence import mu

    n_dim = 60 if quick else 500
    k_dim = 12 if quick else 24
    n_tau = 10 if quick else 20
    d_cls = 300 if quick else 1500
    n_mu = 40 if quick else 150

    def tau() -> bool:
        series = oracles.delta_coefficients(n_tau)
        return all(trace(m, 1, 12).total == series[m] for m in range(1, n_tau + 1))

    def dims() -> bool:
        return all(dimension(N, k) == oracles.dimension_formula(N, k)
                   for N in range(1, n_dim + 1) for k in range(2, k_dim + 1, 2))

    def classes() -> bool:
        return all(class_number(d) == oracles.brute_class_number(d)
                   for d in range(-3, -d_cls, -1) if d % 4 in (0, 1))

    def local_weights() -> bool:
        for N in range(1, n_mu + 1):
            for m in (2, 3, 5):
                for t in range(0, 2 * m):
                    for n in (1, 2, 3):
                        if t * t - 4 * m < 0 and (t * t - 4 * m) % (n * n) == 0:
                            if mu(t, n, m, N) != oracles.brute_mu(t, n, m, N):
                                return False
        return True

    def points() -> bool:
        return (second_coeff(3, 2, 12) == 63504 and second_coeff(3, 4, 8) == 144
                and second_coeff(7, 12, 4) == 0)

    def staircases() -> bool:
        return all(row["status"] != "fails"
                   for m in cert.SUPPORTED_M for row in cert.verify_staircase(m)["rows"])

    return [
        ("trace of T_m at level 1, weight 12 equals tau(m)", tau),
        ("trace of T_1 equals the dimension formula", dims),
        ("class numbers agree with brute-force form counts", classes),
        ("local weights agree with brute-force residue counts", local_weights),
        ("reference a2 values", points),
        ("staircase rows follow from the theta table", staircases),
        ("analytic tail bounds", lambda: cert.analytic_tail_check()["passed"]),
    ]


def cmd_selftest(args, out) -> int:
    start = time.perf_counter()
    for name, check in _selftest_checks(args.quick):
        t0 = time.perf_counter()
        ok = check()
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}  ({time.perf_counter() - t0:.2f}s)\n")
        if not ok:
            out.write(f"selftest failed: {name}\n")
            return EXIT_FAULT
    out.write(f"selftest passed in {time.perf_counter() - start:.2f}s\n")
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="heckesign", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt_flag(sp, choices=("table", "csv", "json")) -> None:
        sp.add_argument("--format", choices=choices, help="default: table on a terminal, csv otherwise")

    sp = sub.add_parser("trace", help="trace of T_m on S_k(Gamma0(N))")
    sp.add_argument("m", type=_positive)
    sp.add_argument("N", type=_positive)
    sp.add_argument("k", type=int)
    sp.add_argument("--breakdown", action="store_true", help="also print the four trace-formula terms")
    fmt_flag(sp)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("a2", help="second Hecke-polynomial coefficient and its sign")
    sp.add_argument("m", type=_positive)
    sp.add_argument("N", type=_positive)
    sp.add_argument("k", type=int)
    fmt_flag(sp)
    sp.set_defaults(func=cmd_a2)

    sp = sub.add_parser("certify", help="explicit sign certificate for m in {2, 3, 4}")
    sp.add_argument("m", type=_positive)
    sp.add_argument("N", type=_positive)
    sp.add_argument("k", type=int)
    fmt_flag(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("theta", help="theta profile of N, or verify the theta table")
    sp.add_argument("N", type=_positive, nargs="?")
    sp.add_argument("--verify-table", action="store_true")
    sp.add_argument("--cap", type=_positive, default=10**6, help="scan limit for --verify-table")
    sp.add_argument("--window", type=_positive, default=None,
                    help="scan rows above the cap over this many levels")
    sp.add_argument("--threads", type=int, default=None)
    fmt_flag(sp)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("search", help="list exceptional (N, k) in a region")
    sp.add_argument("m", type=_positive)
    sp.add_argument("--nmin", type=_positive, default=1)
    sp.add_argument("--nmax", type=_positive)
    sp.add_argument("--kmin", type=int, default=2)
    sp.add_argument("--kmax", type=int)
    sp.add_argument("--residual-region", "--paper-region", dest="residual_region", action="store_true",
                    help="the whole region left open by the staircase for m")
    sp.add_argument("--mode", choices=("exact", "hybrid"), default="exact")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--checkpoint", help="JSONL progress file; rerunning resumes")
    sp.add_argument("--threads", type=int, default=None,
                    help=f"worker processes (default ${THREADS_ENV} or 1)")
    sp.add_argument("--max-seconds", type=float, default=None)
    fmt_flag(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("selftest", help="cross-check against brute-force oracles")
    sp.add_argument("--quick", action="store_true")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except UsageError as exc:
        sys.stderr.write(f"heckesign: error: {exc}\n")
        return EXIT_USAGE
    except TraceIntegralityError as exc:
        sys.stderr.write(f"heckesign: integrality fault: {exc}\n")
        return EXIT_FAULT
    except CheckpointError as exc:
        sys.stderr.write(f"heckesign: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"heckesign: input error: {exc}\n")
        return EXIT_USAGE
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
