"""Compare compiled grammars with brute-force folding on seeded random systems."""

import argparse
import random

from foldlang.fsystem import FSystem, bounded_equiv, claim_A_check
from foldlang.generators import random_fsystem_parts, random_rlg
from foldlang.linear_grammar import fsystem_to_linear


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--systems", type=int, default=100)
    ap.add_argument("--grammar-pairs", type=int, default=25)
    ap.add_argument("--max-len", type=int, default=8)
    ap.add_argument("--seed", type=int, default=20221)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    bad = 0
    for i in range(args.systems):
        core, proc = random_fsystem_parts(rng, 4, 3)
        r = bounded_equiv(FSystem(core, proc), fsystem_to_linear(core, proc), args.max_len)
        if not r.equivalent:
            bad += 1
            print(f"system {i}: missing={r.missing} extra={r.extra}")
    print(f"systems: {args.systems - bad}/{args.systems} equivalent to length {args.max_len}")

    failed = 0
    for i in range(args.grammar_pairs):
        r = claim_A_check(random_rlg(rng, "ab", 3, "A"), random_rlg(rng, "du", 3, "B"), args.max_len - 1)
        if not r.passed:
            failed += 1
            print(f"grammar pair {i}: failing pairs {[str(p) for p, _ in r.failures]}")
    print(f"grammar pairs: {args.grammar_pairs - failed}/{args.grammar_pairs} pass every start pair")


if __name__ == "__main__":
    main()
