"""Compile the (abc)* / (udd)* folding system and compare it with the worked grammar."""

import argparse

from foldlang.fixtures import example1_product, example1_system, example1_words
from foldlang.fsystem import bounded_equiv
from foldlang.linear_grammar import enumerate_linear, fsystem_to_linear, isomorphic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-len", type=int, default=18)
    args = ap.parse_args()

    phi = example1_system()
    g = fsystem_to_linear(phi.core, phi.proc)
    raw = fsystem_to_linear(phi.core, phi.proc, raw=True)
    print(g.to_text(), end="")
    print(f"raw pairs: {len(raw.nonterminals)}  trimmed: {len(g.nonterminals)}")
    print(f"isomorphic to worked grammar: {isomorphic(g, example1_product())}")
    words = enumerate_linear(g, args.max_len)
    print(f"enumeration to {args.max_len}: {' '.join(w or 'eps' for w in words)}")
    print(f"equals a^n (bc)^n: {words == example1_words(args.max_len)}")
    print(f"bounded equivalence with brute force to 12: {bounded_equiv(phi, g, 12).equivalent}")


if __name__ == "__main__":
    main()
