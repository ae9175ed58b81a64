"""Time member_linear on a^n (bc)^n words of growing length and report doubling ratios."""

import argparse
import statistics
import time

from foldlang.fixtures import example1_product
from foldlang.linear_grammar import member_linear


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lengths", type=int, nargs="+", default=[999, 1998, 3999, 7998])
    ap.add_argument("--runs", type=int, default=5)
    args = ap.parse_args()

    g = example1_product()
    member_linear(g, "abc")  # jit warm-up
    prev = None
    for n in args.lengths:
        k = n // 3
        w = "a" * k + "bc" * k
        samples = []
        for _ in range(args.runs):
            t = time.perf_counter()
            assert member_linear(g, w)
            samples.append(time.perf_counter() - t)
        med = statistics.median(samples)
        ratio = f"{med / prev:.2f}" if prev else "-"
        print(f"n={len(w):6d}  median={med * 1e3:9.2f} ms  ratio={ratio}")
        prev = med


if __name__ == "__main__":
    main()
