"""Run every method over random corpora and summarize sshr-i's gains per n.

Writes the per-function comparison rows to ``--out`` and prints one summary
line per n: total T-count, decomposed CNOT and max ancilla for each method,
followed by the relative CNOT reduction of sshr-i against each baseline.

Example::

    python scripts/corpus_gains.py --n 3 4 5 --count 200 --time-limit 5 --out gains.csv
"""

import argparse
import csv
import sys

from sshr.circuit import GateStats
from sshr.pipeline import (
    COMPARE_HEADER,
    METHODS,
    RunConfig,
    compare,
    compare_row,
    dominance_violations,
    parse_objective,
)
from sshr.boolfn import random_corpus


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--objective", default="cnot")
    ap.add_argument("--time-limit", type=float, default=10.0)
    ap.add_argument("--node-limit", type=int, default=None)
    ap.add_argument("--deterministic", action="store_true")
    ap.add_argument("--out", default=None, help="per-function CSV (default: not written)")
    args = ap.parse_args()

    sink = open(args.out, "w", newline="") if args.out else None
    writer = csv.writer(sink) if sink else None
    if writer:
        writer.writerow(COMPARE_HEADER)
    print(",".join(COMPARE_HEADER))
    violations = 0
    for n in args.n:
        cfg = RunConfig(
            n,
            objective=parse_objective(args.objective),
            time_limit=args.time_limit,
            node_limit=args.node_limit,
            deterministic=args.deterministic,
        )
        totals = {m: GateStats() for m in METHODS}
        for f in random_corpus(n, args.count, args.seed):
            results = compare(f, cfg)
            violations += len(dominance_violations(results))
            if writer:
                writer.writerow(compare_row(n, f.hex_id, {m: r.stats for m, r in results.items()}))
            for m, r in results.items():
                totals[m] = totals[m] + r.stats
        print(",".join(compare_row(n, f"TOTAL({args.count})", totals)), flush=True)
    if sink:
        sink.close()
    if violations:
        print(f"{violations} dominance violations", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
