"""Search-space size of the parallelotope family against subcubes, n = 1..8."""

import argparse
import time

from sshr.ptope import FamilyKind, count_formula, enumerate_all, subcube_count


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6, help="enumerate up to this n (formula beyond)")
    args = ap.parse_args()
    print("n,full,subcube,ratio,enumerated,seconds")
    for n in range(1, 9):
        full, sub = count_formula(n), subcube_count(n)
        enumerated, secs = "", ""
        if n <= args.max_n:
            t0 = time.perf_counter()
            got = len(enumerate_all(n, FamilyKind.FULL))
            secs = f"{time.perf_counter() - t0:.2f}"
            enumerated = str(got)
            assert got == full
        print(f"{n},{full},{sub},{full / sub:.3f},{enumerated},{secs}")


if __name__ == "__main__":
    main()
