"""Finite automata and right-linear grammars.

A :class:`Dfa` is always total and, once it has passed through
:func:`canonical`, its states are numbered in breadth-first order of first
reach from the start state (scanning symbols in alphabet order).  Alphabets are
plain tuples of single-character strings; their order fixes enumeration order.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Hashable, Iterable, Iterator, Optional, Sequence

from . import regex as rx
from .errors import AlphabetMismatch, CapExceeded, InvalidResidue, NotNormalForm

DEFAULT_ENUM_CAP = 24

Alphabet = tuple


def enum_cap() -> int:
    """Enumeration cap, overridable through ``FOLDLANG_MAX_ENUM``."""
    return int(os.environ.get("FOLDLANG_MAX_ENUM", DEFAULT_ENUM_CAP))


def make_alphabet(symbols: Iterable[str]) -> Alphabet:
    """Validated alphabet; a set is sorted by code point, a sequence keeps its order."""
    if isinstance(symbols, (set, frozenset)):
        symbols = sorted(symbols)
    out = tuple(symbols)
    if len(set(out)) != len(out):
        raise AlphabetMismatch(f"duplicate symbols in alphabet {out!r}")
    for s in out:
        if not rx.valid_symbol(s):
            raise AlphabetMismatch(f"invalid symbol {s!r}")
    return out


def word_key(alphabet: Alphabet):
    """Sort key giving (length, lexicographic by alphabet order)."""
    rank = {s: i for i, s in enumerate(alphabet)}
    return lambda w: (len(w), [rank.get(c, len(rank) + ord(c)) for c in w])


@dataclass(frozen=True)
class Nfa:
    alphabet: Alphabet
    state_count: int
    start: int
    accepting: frozenset
    transitions: frozenset  # of (state, symbol or None, state)

    def __post_init__(self):
        ids = [self.start, *self.accepting]
        ids += [p for p, _, _ in self.transitions] + [q for _, _, q in self.transitions]
        if any(not 0 <= i < self.state_count for i in ids):
            raise ValueError("state id out of range")


@dataclass(frozen=True)
class Dfa:
    alphabet: Alphabet
    delta: tuple  # delta[state][symbol index] -> state
    start: int = 0
    accepting: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = len(self.delta)
        if not 0 <= self.start < n:
            raise ValueError("start state out of range")
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ValueError("delta must be total")
            if any(not 0 <= q < n for q in row):
                raise ValueError("transition target out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise ValueError("accepting state out of range")

    @property
    def state_count(self) -> int:
        return len(self.delta)

    @property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.alphabet)}

    def run(self, word: str, state: Optional[int] = None) -> Optional[int]:
        """State reached after reading ``word``; ``None`` if a symbol is foreign."""
        index = self.index
        q = self.start if state is None else state
        for ch in word:
            i = index.get(ch)
            if i is None:
                return None
            q = self.delta[q][i]
        return q

    def accepts(self, word: str) -> bool:
        return self.run(word) in self.accepting

    def live_states(self) -> set:
        """States from which some accepting state is reachable."""
        preds = [set() for _ in self.delta]
        for p, row in enumerate(self.delta):
            for q in row:
                preds[q].add(p)
        live = set(self.accepting)
        todo = list(live)
        while todo:
            q = todo.pop()
            for p in preds[q] - live:
                live.add(p)
                todo.append(p)
        return live

    def dump(self) -> str:
        lines = [f"alphabet: {' '.join(self.alphabet)}", f"start {self.start}",
                 "accept" + "".join(f" {q}" for q in sorted(self.accepting))]
        for p, row in enumerate(self.delta):
            for s, q in zip(self.alphabet, row):
                lines.append(f"{p} {s} -> {q}")
        return "\n".join(lines)

    @classmethod
    def empty(cls, alphabet: Sequence[str]) -> "Dfa":
        alphabet = make_alphabet(alphabet)
        return cls(alphabet, ((0,) * len(alphabet),), 0, frozenset())

    @classmethod
    def universal(cls, alphabet: Sequence[str]) -> "Dfa":
        alphabet = make_alphabet(alphabet)
        return cls(alphabet, ((0,) * len(alphabet),), 0, frozenset({0}))


def canonical(d: Dfa) -> Dfa:
    """Drop unreachable states and renumber the rest breadth-first."""
    order = {d.start: 0}
    queue = deque([d.start])
    while queue:
        p = queue.popleft()
        for q in d.delta[p]:
            if q not in order:
                order[q] = len(order)
                queue.append(q)
    delta = [None] * len(order)
    for old, new in order.items():
        delta[new] = tuple(order[q] for q in d.delta[old])
    accepting = frozenset(order[q] for q in d.accepting if q in order)
    return Dfa(d.alphabet, tuple(delta), 0, accepting)


def minimize(d: Dfa) -> Dfa:
    """Minimal canonical DFA by Moore partition refinement."""
    d = canonical(d)
    first = {}
    block = [first.setdefault(q in d.accepting, len(first)) for q in range(d.state_count)]
    count = len(first)
    while True:
        sigs = {}
        new_block = []
        for q, row in enumerate(d.delta):
            sig = (block[q], tuple(block[t] for t in row))
            new_block.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            break
        block, count = new_block, len(sigs)
    delta = [None] * count
    for q, row in enumerate(d.delta):
        delta[block[q]] = tuple(block[t] for t in row)
    accepting = frozenset(block[q] for q in d.accepting)
    return canonical(Dfa(d.alphabet, tuple(delta), block[d.start], accepting))


def _eps_closure(states, eps):
    stack = list(states)
    seen = set(states)
    while stack:
        p = stack.pop()
        for q in eps.get(p, ()):
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return frozenset(seen)


def nfa_to_dfa(nfa: Nfa) -> Dfa:
    """Subset construction; the dead subset acts as the sink."""
    eps, moves = {}, {}
    for p, a, q in nfa.transitions:
        if a is None:
            eps.setdefault(p, set()).add(q)
        else:
            moves.setdefault((p, a), set()).add(q)
    start = _eps_closure({nfa.start}, eps)
    ids = {start: 0}
    rows = []
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        row = []
        for a in nfa.alphabet:
            target = set()
            for p in subset:
                target |= moves.get((p, a), set())
            target = _eps_closure(target, eps)
            if target not in ids:
                ids[target] = len(ids)
                queue.append(target)
            row.append(ids[target])
        rows.append(tuple(row))
    accepting = frozenset(i for s, i in ids.items() if s & nfa.accepting)
    return Dfa(nfa.alphabet, tuple(rows), 0, accepting)


def compile_regex(text: str, alphabet: Optional[Sequence[str]] = None) -> Dfa:
    """Minimal canonical DFA for a regex in the toolkit dialect."""
    ast = rx.parse_regex(text)
    used = rx.literals(ast)
    if alphabet is None:
        alphabet = make_alphabet(used)
    else:
        alphabet = make_alphabet(alphabet)
        stray = used - set(alphabet)
        if stray:
            raise AlphabetMismatch(f"literals {sorted(stray)} outside alphabet {alphabet!r}")
    count, start, accept, transitions = rx.thompson(ast)
    nfa = Nfa(alphabet, count, start, frozenset({accept}), frozenset(transitions))
    return minimize(nfa_to_dfa(nfa))


def with_alphabet(d: Dfa, alphabet: Sequence[str]) -> Dfa:
    """Same language over a larger alphabet; new symbols lead to a sink."""
    alphabet = make_alphabet(alphabet)
    if not set(d.alphabet) <= set(alphabet):
        raise AlphabetMismatch(f"{d.alphabet!r} is not contained in {alphabet!r}")
    if alphabet == d.alphabet:
        return d
    sink = d.state_count
    index = d.index
    rows = [tuple(row[index[a]] if a in index else sink for a in alphabet) for row in d.delta]
    rows.append((sink,) * len(alphabet))
    return minimize(Dfa(alphabet, tuple(rows), d.start, d.accepting))


def dfa_reverse(d: Dfa) -> Dfa:
    transitions = set()
    for p, row in enumerate(d.delta):
        for a, q in zip(d.alphabet, row):
            transitions.add((q + 1, a, p + 1))
    transitions |= {(0, None, q + 1) for q in d.accepting}
    nfa = Nfa(d.alphabet, d.state_count + 1, 0, frozenset({d.start + 1}), frozenset(transitions))
    return minimize(nfa_to_dfa(nfa))


def _check_same_alphabet(d1: Dfa, d2: Dfa):
    if d1.alphabet != d2.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {d1.alphabet!r} vs {d2.alphabet!r}")


def _product_pairs(d1: Dfa, d2: Dfa) -> dict:
    ids = {(d1.start, d2.start): 0}
    queue = deque(ids)
    rows = {}
    while queue:
        p = queue.popleft()
        row = []
        for r1, r2 in zip(d1.delta[p[0]], d2.delta[p[1]]):
            if (r1, r2) not in ids:
                ids[(r1, r2)] = len(ids)
                queue.append((r1, r2))
            row.append(ids[(r1, r2)])
        rows[p] = tuple(row)
    return ids, rows


def dfa_intersect(d1: Dfa, d2: Dfa) -> Dfa:
    _check_same_alphabet(d1, d2)
    ids, rows = _product_pairs(d1, d2)
    delta = [None] * len(ids)
    for pair, i in ids.items():
        delta[i] = rows[pair]
    accepting = frozenset(i for (p, q), i in ids.items() if p in d1.accepting and q in d2.accepting)
    return minimize(Dfa(d1.alphabet, tuple(delta), 0, accepting))


def dfa_equiv(d1: Dfa, d2: Dfa) -> bool:
    """Exact language equality: no reachable product state disagrees on acceptance."""
    _check_same_alphabet(d1, d2)
    ids, _ = _product_pairs(d1, d2)
    return all((p in d1.accepting) == (q in d2.accepting) for p, q in ids)


def length_filter(alphabet: Sequence[str], modulus: int, residue: int, min_len: int) -> Dfa:
    """Accept exactly the words with length = residue (mod modulus) and length >= min_len."""
    if modulus < 1 or not 0 <= residue < modulus or min_len < 0:
        raise InvalidResidue(f"modulus={modulus} residue={residue} min_len={min_len}")
    alphabet = make_alphabet(alphabet)
    top = min_len + modulus
    rows = []
    for i in range(top):
        nxt = i + 1 if i + 1 < top else min_len
        rows.append((nxt,) * len(alphabet))
    accepting = frozenset(i for i in range(top) if i >= min_len and i % modulus == residue)
    return minimize(Dfa(alphabet, tuple(rows), 0, accepting))


def words_of_length(d: Dfa, n: int) -> list:
    """Accepted words of length exactly ``n`` in alphabet-lexicographic order."""
    live = d.live_states()
    if d.start not in live:
        return []
    can = [set() for _ in range(n + 1)]  # can[k]: states accepting some word of length k
    can[0] = set(d.accepting)
    for k in range(1, n + 1):
        can[k] = {q for q, row in enumerate(d.delta) if any(t in can[k - 1] for t in row)}
    if d.start not in can[n]:
        return []
    layer = [("", d.start)]
    for k in range(n, 0, -1):
        nxt = []
        for prefix, q in layer:
            for a, t in zip(d.alphabet, d.delta[q]):
                if t in can[k - 1]:
                    nxt.append((prefix + a, t))
        layer = nxt
    return [w for w, _ in layer]


def enumerate_dfa(d: Dfa, max_len: int, cap: Optional[int] = None) -> list:
    cap = enum_cap() if cap is None else cap
    if max_len > cap:
        raise CapExceeded(f"max_len {max_len} exceeds enumeration cap {cap}")
    out = []
    for n in range(max_len + 1):
        out.extend(words_of_length(d, n))
    return out


def count_vector(d: Dfa, max_len: int) -> list:
    """``[count_words(d, n) for n in 0..max_len]`` in one dynamic-programming pass."""
    reach = [0] * d.state_count
    reach[d.start] = 1
    counts = []
    for n in range(max_len + 1):
        counts.append(sum(reach[q] for q in d.accepting))
        nxt = [0] * d.state_count
        for p, c in enumerate(reach):
            if c:
                for q in d.delta[p]:
                    nxt[q] += c
        reach = nxt
    return counts


def count_words(d: Dfa, n: int) -> int:
    return count_vector(d, n)[n]


# right-linear grammars ------------------------------------------------------

@dataclass(frozen=True)
class RightLinearGrammar:
    """Normal-form right-linear grammar: rules ``A -> a B`` and ``A -> eps``.

    ``steps`` holds triples ``(A, a, B)``; ``finals`` the nonterminals with an
    epsilon rule.
    """

    nonterminals: tuple
    terminals: Alphabet
    steps: tuple
    finals: frozenset
    start: Hashable

    def __post_init__(self):
        declared = set(self.nonterminals)
        if self.start not in declared:
            raise NotNormalForm(f"start {self.start!r} is not declared")
        for a, sym, b in self.steps:
            if a not in declared or b not in declared:
                raise NotNormalForm(f"rule {a} -> {sym} {b} uses an undeclared nonterminal")
            if sym not in self.terminals:
                raise NotNormalForm(f"rule {a} -> {sym} {b}: {sym!r} is not a terminal")
        if not self.finals <= declared:
            raise NotNormalForm("epsilon rule for an undeclared nonterminal")

    def rules_text(self) -> str:
        lines = []
        for a in self.nonterminals:
            alts = ["eps"] if a in self.finals else []
            alts += [f"{s} {b}" for x, s, b in self.steps if x == a]
            if alts:
                lines.append(f"{a} -> " + " | ".join(alts))
        return "\n".join(lines)


def dfa_to_rlg(d: Dfa, prefix: str = "S", keep_dead: bool = False) -> RightLinearGrammar:
    """One nonterminal per reachable state, named ``prefix + i`` in breadth-first order.

    Dead states (no path to acceptance) are dropped unless ``keep_dead``; the
    start state is always kept.
    """
    d = canonical(d)
    live = d.live_states()
    kept = [q for q in range(d.state_count) if keep_dead or q in live or q == d.start]
    name = {q: f"{prefix}{i}" for i, q in enumerate(kept)}
    steps = tuple((name[p], a, name[q]) for p in kept
                  for a, q in zip(d.alphabet, d.delta[p])
                  if q in name and (keep_dead or q in live))
    finals = frozenset(name[q] for q in kept if q in d.accepting)
    return RightLinearGrammar(tuple(name[q] for q in kept), d.alphabet, steps, finals, name[d.start])


def rlg_to_nfa(g: RightLinearGrammar) -> Nfa:
    ids = {a: i for i, a in enumerate(g.nonterminals)}
    transitions = frozenset((ids[a], s, ids[b]) for a, s, b in g.steps)
    return Nfa(g.terminals, len(ids), ids[g.start], frozenset(ids[a] for a in g.finals), transitions)


def rlg_to_dfa(g: RightLinearGrammar) -> Dfa:
    return minimize(nfa_to_dfa(rlg_to_nfa(g)))


def rlg_start_variant(g: RightLinearGrammar, start) -> RightLinearGrammar:
    return replace(g, start=start)


def iter_words(alphabet: Alphabet, n: int) -> Iterator[str]:
    """All words of length ``n`` in lexicographic alphabet order."""
    if n == 0:
        yield ""
        return
    for w in iter_words(alphabet, n - 1):
        for a in alphabet:
            yield w + a
