"""Folding systems over regular languages and their linear-grammar compilation."""

__version__ = "0.1.0"

from .automata import (
    Dfa, Nfa, RightLinearGrammar, compile_regex, count_words, dfa_equiv, dfa_intersect,
    dfa_reverse, dfa_to_rlg, enumerate_dfa, length_filter, minimize,
)
from .errors import FoldlangError
from .folding import fold, fold_permutation, unfold
from .fsystem import (
    FSystem, bounded_equiv, brute_language, claim_A_check, interchange_demo, member_fsystem,
)
from .linear_grammar import (
    LinearGrammar, ProductNonterminal, enumerate_linear, fsystem_to_linear, member_linear,
    parse_grammar, product_construct, start_variant, trim,
)
from .properties import (
    RefuterConfig, balance_check, pump_decompose, refute_bounded, thm2_language, union_demo,
)
