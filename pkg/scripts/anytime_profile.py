"""Incumbent TC over time for the exact solver on random 5-bit functions.

Prints one line per improvement: function id, milliseconds, TC, nodes.  Useful
for choosing a time limit: most improvements land early, proofs take longer.
"""

import argparse

from sshr.boolfn import random_corpus
from sshr.paritycover import build_instance, solve
from sshr.pipeline import METHOD_KIND, parse_objective
from sshr.ptope import enumerate_all


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--method", choices=["sshr-i", "esop-i"], default="sshr-i")
    ap.add_argument("--objective", default="cnot")
    ap.add_argument("--time-limit", type=float, default=10.0)
    args = ap.parse_args()
    family = enumerate_all(args.n, METHOD_KIND[args.method])
    objective = parse_objective(args.objective)
    print("id,t_ms,tc,nodes,status")
    for f in random_corpus(args.n, args.count, args.seed):
        sol = solve(build_instance(f, family, objective), args.time_limit)
        for t_ms, tc, nodes in sol.log:
            print(f"{f.hex_id},{t_ms:.1f},{tc},{nodes},")
        print(f"{f.hex_id},{sol.wall_ms:.1f},{sol.tc},{sol.nodes},{sol.status}")


if __name__ == "__main__":
    main()
