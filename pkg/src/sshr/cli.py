"""Command-line driver: synth, enum, bench, compare, export-ilp, verify, check-solution.

Exit codes: 0 success, 1 mismatch (verify / check-solution), 2 bad input,
3 self-verification failure, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .boolfn import MAX_VARS, BoolFn, parse_function
from .circuit import GateStats, emit, parse_netlist, verify_oracle
from .paritycover import (
    build_instance,
    export_lp,
    read_solution_file,
    solution_from_indices,
    verify_solution,
)
from .pipeline import (
    COMPARE_HEADER,
    CSV_HEADER,
    METHODS,
    TIME_LIMIT_ENV,
    RunConfig,
    aggregate_row,
    compare,
    compare_row,
    corpus,
    default_time_limit,
    dominance_violations,
    parse_objective,
    result_row,
    synthesize,
)
from .ptope import FamilyKind, count_formula, dump_family, enumerate_all, subcube_count

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_VERIFY, EXIT_INTERNAL = range(5)


class BadInput(Exception):
    pass


class VerificationFailure(Exception):
    pass


def _n(text: str) -> int:
    n = int(text)
    if not 1 <= n <= MAX_VARS:
        raise argparse.ArgumentTypeError(f"n must be in [1, {MAX_VARS}]")
    return n


def _ratio(text: str) -> Fraction:
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad ratio {text!r}") from None
    if not 0 < r <= 1:
        raise argparse.ArgumentTypeError("ratio must lie in (0, 1]")
    return r


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common(p: argparse.ArgumentParser, *, method: bool = True) -> None:
    p.add_argument("--n", type=_n, required=True, help="number of input variables")
    if method:
        p.add_argument("--method", choices=METHODS, default="sshr-h", help="synthesis method (default: sshr-h)")
    p.add_argument(
        "--objective",
        default="cnot",
        help="cnot (CNOT first, T tie-break), tcount (T first, CNOT tie-break) "
        "or weighted:A,B for A*CNOT + B*T (default: cnot)",
    )
    p.add_argument("--ratio", type=_ratio, default=Fraction(3, 4), help="greedy ratio R in (0, 1] (default: 3/4)")
    p.add_argument(
        "--time-limit",
        type=_positive_float,
        default=None,
        help=f"seconds per exact solve (default: 120, or ${TIME_LIMIT_ENV})",
    )
    p.add_argument("--node-limit", type=_positive_int, default=None, help="node budget per exact solve")
    p.add_argument("--seed", type=int, default=0, help="corpus RNG seed (default: 0)")
    p.add_argument(
        "--deterministic",
        action="store_true",
        help="ignore the wall clock: the time limit becomes a node budget and wall_ms is reported as 0",
    )


def _config(args: argparse.Namespace, method: str | None = None) -> RunConfig:
    try:
        time_limit = args.time_limit if args.time_limit is not None else default_time_limit()
        return RunConfig(
            n=args.n,
            method=method or args.method,
            objective=parse_objective(args.objective),
            ratio=args.ratio,
            time_limit=time_limit,
            node_limit=args.node_limit,
            seed=args.seed,
            fmt=getattr(args, "format", "qasm"),
            deterministic=args.deterministic,
        )
    except ValueError as exc:
        raise BadInput(str(exc)) from None


def _function(args: argparse.Namespace) -> BoolFn:
    try:
        return parse_function(args.id, args.n)
    except (ValueError, OSError) as exc:
        raise BadInput(str(exc)) from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv(rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = _config(args)
    f = _function(args)
    try:
        result = synthesize(f, cfg)
    except AssertionError as exc:
        raise VerificationFailure(str(exc)) from None
    # no artifact leaves without passing the oracle check
    if not verify_oracle(result.circuit, f):
        raise VerificationFailure(f"{cfg.method} circuit does not implement {f.hex_id}")
    _write(args.out, emit(result.circuit, cfg.fmt, result.stats))
    if args.stats:
        _write(args.stats, _csv([CSV_HEADER, result_row(result)]))
    if args.log:
        _write(args.log, "".join(f"{t:.3f}, {tc}, {nodes}\n" for t, tc, nodes in result.log))
    print(
        f"{f.hex_id} method={result.method} objective={cfg.objective.name} TC={result.tc} "
        f"status={result.status} blocks={len(result.selected)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_enum(args: argparse.Namespace) -> int:
    full = len(enumerate_all(args.n, FamilyKind.FULL))
    sub = len(enumerate_all(args.n, FamilyKind.SUBCUBE))
    assert full == count_formula(args.n) and sub == subcube_count(args.n)
    print(f"FULL={full} SUBCUBE={sub} ratio={full / sub:.4f}")
    if args.dump:
        _write(args.dump, dump_family(enumerate_all(args.n, FamilyKind(args.kind))))
    return EXIT_OK


def _corpus(args: argparse.Namespace, cfg: RunConfig) -> list[BoolFn]:
    try:
        if args.id is not None:
            return [_function(args)]
        return corpus(args.corpus, cfg.n, cfg.seed)
    except (ValueError, OSError) as exc:
        raise BadInput(str(exc)) from None


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _config(args)
    rows = [CSV_HEADER]
    results = []
    for f in _corpus(args, cfg):
        try:
            r = synthesize(f, cfg)
        except AssertionError as exc:
            raise VerificationFailure(str(exc)) from None
        results.append(r)
        rows.append(result_row(r))
    if results:
        rows.append(aggregate_row(cfg.n, cfg.method, results))
    _write(args.out, _csv(rows))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _config(args, method="sshr-i")
    rows = [COMPARE_HEADER]
    totals = {m: GateStats() for m in METHODS}
    failures = []
    functions = _corpus(args, cfg)
    for f in functions:
        try:
            results = compare(f, cfg)
        except AssertionError as exc:
            raise VerificationFailure(str(exc)) from None
        failures += [f"{f.hex_id}: {v}" for v in dominance_violations(results)]
        rows.append(compare_row(cfg.n, f.hex_id, {m: r.stats for m, r in results.items()}))
        for m, r in results.items():
            totals[m] = totals[m] + r.stats
    if len(functions) > 1:
        rows.append(compare_row(cfg.n, "TOTAL", totals))
    _write(args.out, _csv(rows))
    if failures:
        raise VerificationFailure("dominance violated: " + "; ".join(failures))
    return EXIT_OK


def _instance(args: argparse.Namespace):
    cfg = _config(args)
    f = _function(args)
    family = enumerate_all(cfg.n, cfg.kind)
    try:
        return build_instance(f, family, cfg.objective)
    except ValueError as exc:
        raise BadInput(str(exc)) from None


def cmd_export_ilp(args: argparse.Namespace) -> int:
    inst = _instance(args)
    _write(args.out, export_lp(inst, with_integer_helpers=not args.no_helpers))
    return EXIT_OK


def cmd_check_solution(args: argparse.Namespace) -> int:
    inst = _instance(args)
    try:
        indices = read_solution_file(Path(args.solution).read_text())
        sol = solution_from_indices(inst, indices)
    except (ValueError, OSError) as exc:
        raise BadInput(str(exc)) from None
    ok = verify_solution(inst, sol)
    print(f"{'valid' if ok else 'invalid'} TC={sol.tc} sets={len(sol.indices)}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_verify(args: argparse.Namespace) -> int:
    f = _function(args)
    try:
        c = parse_netlist(Path(args.netlist).read_text(), args.n + 1)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        raise BadInput(f"cannot read netlist: {exc}") from None
    ok = verify_oracle(c, f)
    print("ok" if ok else "mismatch")
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sshr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize one function and emit its netlist")
    _common(p)
    p.add_argument("--id", required=True, help="hex id, 2^n-bit string, or minterm file")
    p.add_argument("--format", choices=("qasm", "json"), default="qasm")
    p.add_argument("--out", "-o", help="netlist path (default: stdout)")
    p.add_argument("--stats", help="write a stats CSV row here")
    p.add_argument("--log", help="write the solver improvement log (t_ms, TC, nodes) here")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("enum", help="count (and optionally dump) the parallelotope family")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--kind", choices=[k.value for k in FamilyKind], default="full")
    p.add_argument("--dump", help="write the family, one parallelotope per line ('-' for stdout)")
    p.set_defaults(func=cmd_enum)

    for name, func, helptext in (
        ("bench", cmd_bench, "run one method over a corpus; CSV rows plus a TOTAL row"),
        ("compare", cmd_compare, "run every method and report sshr-i's CNOT gains"),
    ):
        p = sub.add_parser(name, help=helptext)
        _common(p, method=name == "bench")
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--id", help="a single function")
        src.add_argument("--corpus", help="all | random:COUNT | file:PATH")
        p.add_argument("--out", "-o", help="CSV path (default: stdout)")
        p.set_defaults(func=func)

    p = sub.add_parser("export-ilp", help="write the parity cover model in LP format")
    _common(p)
    p.add_argument("--id", required=True)
    p.add_argument("--no-helpers", action="store_true", help="substitute the coverage variables away")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_export_ilp)

    p = sub.add_parser("check-solution", help="verify a list of selected set indices")
    _common(p)
    p.add_argument("--id", required=True)
    p.add_argument("--solution", required=True, help="text file of family indices")
    p.set_defaults(func=cmd_check_solution)

    p = sub.add_parser("verify", help="check a netlist against a function")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--netlist", required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
