"""Seeded random automata and grammars for property checks and experiments."""

from __future__ import annotations

import random
import string

from .automata import Dfa, RightLinearGrammar, make_alphabet
from .folding import DIRECTIONS


def random_dfa(rng: random.Random, alphabet, max_states: int, accept_prob: float = 0.5) -> Dfa:
    """Total DFA with 1..max_states states and uniformly random transitions."""
    alphabet = make_alphabet(alphabet)
    n = rng.randint(1, max_states)
    delta = tuple(tuple(rng.randrange(n) for _ in alphabet) for _ in range(n))
    accepting = frozenset(q for q in range(n) if rng.random() < accept_prob)
    return Dfa(alphabet, delta, 0, accepting)


def random_core_alphabet(rng: random.Random, max_symbols: int = 3) -> tuple:
    return tuple(string.ascii_lowercase[:rng.randint(1, max_symbols)])


def random_fsystem_parts(rng: random.Random, max_states: int = 4, max_symbols: int = 3):
    core = random_dfa(rng, random_core_alphabet(rng, max_symbols), max_states)
    proc = random_dfa(rng, DIRECTIONS, max_states)
    return core, proc


def random_rlg(rng: random.Random, terminals, nonterminals: int = 3, prefix: str = "A",
               rule_prob: float = 0.3, eps_prob: float = 0.4) -> RightLinearGrammar:
    """Normal-form right-linear grammar; may be nondeterministic."""
    terminals = make_alphabet(terminals)
    names = tuple(f"{prefix}{i}" for i in range(nonterminals))
    steps = tuple((a, s, b) for a in names for s in terminals for b in names if rng.random() < rule_prob)
    finals = frozenset(a for a in names if rng.random() < eps_prob)
    return RightLinearGrammar(names, terminals, steps, finals, names[0])
