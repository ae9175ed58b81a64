"""Exhaustive bounded search for a small folding system generating a target language.

Defaults search the # language with 2-state automata up to length 7.  Pass
--example1 to search for the (abc)* / (udd)* language instead.
"""

import argparse
import json
import sys
import time

from foldlang.automata import compile_regex
from foldlang.linear_grammar import fsystem_to_linear
from foldlang.properties import THM2_ALPHABET, RefuterConfig, refute_bounded, thm2_language


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--core-states", type=int, default=2)
    ap.add_argument("--proc-states", type=int, default=2)
    ap.add_argument("--max-len", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--example1", action="store_true")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    if args.example1:
        target = fsystem_to_linear(compile_regex("(abc)*"), compile_regex("(udd)*"))
        alphabet = ("a", "b", "c")
    else:
        target, alphabet = thm2_language(), THM2_ALPHABET
    config = RefuterConfig(args.core_states, args.proc_states, args.max_len, alphabet)
    start = time.perf_counter()
    out = refute_bounded(target, config, workers=args.workers,
                         progress=lambda line: print(line, file=sys.stderr))
    elapsed = time.perf_counter() - start
    if args.json:
        print(json.dumps({**out.to_json(), "seconds": round(elapsed, 2)}, indent=2))
    else:
        print(out.verdict_line())
        print(f"tried={out.candidates_tried} count-pruned={sum(out.prune_stats.values())} "
              f"image-pruned={out.image_pruned} duplicates={out.duplicates} "
              f"exhaustive-rejects={out.equiv_rejected} seconds={elapsed:.1f}")


if __name__ == "__main__":
    main()
