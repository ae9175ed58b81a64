"""Linear grammars: file format, product construction, trimming, enumeration, membership."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from itertools import permutations
from functools import lru_cache
from typing import Hashable, NamedTuple, Optional

import numba
import numpy as np

from .automata import (
    Dfa, Nfa, RightLinearGrammar, dfa_reverse, dfa_to_rlg, enum_cap, make_alphabet,
    minimize, nfa_to_dfa, word_key,
)
from .errors import (
    CapExceeded, NotLinear, NotNormalForm, NotRightLinear, ParseError, ProcAlphabetError,
    UnknownNonterminal,
)
from .folding import DIRECTIONS, UP


class ProductNonterminal(NamedTuple):
    left: Hashable
    right: Hashable

    def __str__(self):
        return f"({self.left},{self.right})"


@dataclass(frozen=True)
class Rule:
    """``lhs -> left mid right``; ``mid`` is ``None`` for a terminal-only rule."""

    lhs: Hashable
    left: str = ""
    mid: Optional[Hashable] = None
    right: str = ""

    def __post_init__(self):
        if self.mid is None and self.right:
            object.__setattr__(self, "left", self.left + self.right)
            object.__setattr__(self, "right", "")


@dataclass(frozen=True)
class LinearGrammar:
    nonterminals: tuple
    terminals: tuple
    rules: tuple
    start: Hashable

    def __post_init__(self):
        declared = set(self.nonterminals)
        if self.start not in declared:
            raise UnknownNonterminal(f"start {self.start} is not declared")
        alphabet = set(self.terminals)
        for r in self.rules:
            if r.lhs not in declared or (r.mid is not None and r.mid not in declared):
                raise UnknownNonterminal(f"rule for {r.lhs} uses an undeclared nonterminal")
            stray = set(r.left + r.right) - alphabet
            if stray:
                raise ParseError(f"terminals {sorted(stray)} are not in the grammar alphabet")

    @property
    def is_right_linear(self) -> bool:
        return all(not r.right for r in self.rules)

    def rules_for(self, a) -> list:
        return [r for r in self.rules if r.lhs == a]

    def to_text(self) -> str:
        names = {str(a) for a in self.nonterminals}
        lines = [f"start {self.start}"]
        for a in self.nonterminals:
            alts = [_format_rhs(r, names) for r in self.rules_for(a)]
            if alts:
                lines.append(f"{a} -> " + " | ".join(alts))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        rules = []
        for r in self.rules:
            rhs = [{"kind": "T", "value": c} for c in r.left]
            if r.mid is not None:
                rhs.append({"kind": "N", "value": str(r.mid)})
            rhs += [{"kind": "T", "value": c} for c in r.right]
            rules.append({"lhs": str(r.lhs), "rhs": rhs})
        return {"start": str(self.start), "rules": rules}


_MUST_QUOTE = {"|", "-", "'", "#"}


def _format_rhs(r: Rule, names: set) -> str:
    def term(c):
        return f"'{c}'" if c in _MUST_QUOTE or c in names else c

    toks = [term(c) for c in r.left]
    if r.mid is not None:
        toks.append(str(r.mid))
    toks += [term(c) for c in r.right]
    return " ".join(toks) if toks else "eps"


def _build(start, lhs_order, alternatives) -> LinearGrammar:
    """``alternatives``: list of (lhs, [("T"|"N", value), ...])."""
    nonterminals = list(dict.fromkeys([start, *lhs_order]))
    terminals = set()
    rules = []
    for lhs, rhs in alternatives:
        kinds = [k for k, _ in rhs]
        if kinds.count("N") > 1:
            raise NotLinear(f"rule for {lhs} has {kinds.count('N')} nonterminals on the right")
        if "N" in kinds:
            i = kinds.index("N")
            mid = rhs[i][1]
            if mid not in nonterminals:
                nonterminals.append(mid)
            left = "".join(v for _, v in rhs[:i])
            right = "".join(v for _, v in rhs[i + 1:])
        else:
            mid, left, right = None, "".join(v for _, v in rhs), ""
        terminals.update(left + right)
        rules.append(Rule(lhs, left, mid, right))
    return LinearGrammar(tuple(nonterminals), make_alphabet(terminals), tuple(rules), start)


def parse_grammar(text: str) -> LinearGrammar:
    """Parse the line-oriented grammar format (``start X`` then ``X -> ... | ...``)."""
    start = None
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = stripped.split()
        if start is None:
            if toks[0] != "start" or len(toks) != 2:
                raise ParseError(f"line {lineno}: expected 'start <Name>'")
            start = toks[1]
            continue
        if len(toks) < 2 or toks[1] != "->":
            raise ParseError(f"line {lineno}: expected '<Name> -> ...'")
        alts = [[]]
        for t in toks[2:]:
            if t == "|":
                alts.append([])
            else:
                alts[-1].append(t)
        raw.append((lineno, toks[0], alts))
    if start is None:
        raise ParseError("missing 'start <Name>' line")
    lhs_names = {lhs for _, lhs, _ in raw} | {start}
    alternatives = []
    for lineno, lhs, alts in raw:
        for alt in alts:
            if alt == ["eps"]:
                alternatives.append((lhs, []))
                continue
            if not alt:
                raise ParseError(f"line {lineno}: empty alternative (write 'eps')")
            rhs = []
            for t in alt:
                if t in lhs_names:
                    rhs.append(("N", t))
                elif len(t) == 3 and t[0] == t[2] == "'":
                    rhs.append(("T", t[1]))
                elif len(t) == 1 and t not in _MUST_QUOTE:
                    rhs.append(("T", t))
                else:
                    raise ParseError(f"line {lineno}: bad token {t!r}")
            alternatives.append((lhs, rhs))
    return _build(start, [lhs for _, lhs, _ in raw], alternatives)


def grammar_from_json(data) -> LinearGrammar:
    if isinstance(data, str):
        data = json.loads(data)
    alternatives = [(r["lhs"], [(t["kind"], t["value"]) for t in r["rhs"]]) for r in data["rules"]]
    return _build(data["start"], [r["lhs"] for r in data["rules"]], alternatives)


def start_variant(g, a):
    """The same grammar restarted at nonterminal ``a``."""
    if a not in g.nonterminals:
        raise UnknownNonterminal(f"{a} is not a nonterminal of the grammar")
    return replace(g, start=a)


def from_right_linear(g: RightLinearGrammar) -> LinearGrammar:
    rules = [Rule(a, s, b) for a, s, b in g.steps] + [Rule(a) for a in g.nonterminals if a in g.finals]
    return LinearGrammar(g.nonterminals, g.terminals, tuple(rules), g.start)


def right_linear_to_dfa(g: LinearGrammar) -> Dfa:
    """Automaton for a right-linear grammar with arbitrary terminal blocks and unit rules."""
    if not g.is_right_linear:
        raise NotRightLinear("grammar has a rule with terminals after its nonterminal")
    ids = {a: i for i, a in enumerate(g.nonterminals)}
    final = len(ids)
    count = final + 1
    transitions = set()
    for r in g.rules:
        p = ids[r.lhs]
        for c in r.left:
            transitions.add((p, c, count))
            p = count
            count += 1
        transitions.add((p, None, final if r.mid is None else ids[r.mid]))
    nfa = Nfa(g.terminals, count, ids[g.start], frozenset({final}), frozenset(transitions))
    return minimize(nfa_to_dfa(nfa))


def product_construct(g1: RightLinearGrammar, g2: RightLinearGrammar) -> LinearGrammar:
    """Combine a grammar for the reversed core language with one for the reversed procedures.

    A ``u`` step of ``g2`` emits the ``g1`` terminal on the left of the paired
    nonterminal, a ``d`` step emits it on the right, and a pair of epsilon
    rules gives an epsilon rule.
    """
    for g in (g1, g2):
        if not isinstance(g, RightLinearGrammar):
            raise NotNormalForm("product_construct needs normal-form right-linear grammars")
    if not set(g2.terminals) <= set(DIRECTIONS):
        raise ProcAlphabetError(f"procedure terminals {g2.terminals!r} are not within {{u, d}}")
    nonterminals = tuple(ProductNonterminal(a, b) for a in g1.nonterminals for b in g2.nonterminals)
    ups, downs = [], []
    for a, sym, c in g1.steps:
        for b, direction, d in g2.steps:
            if direction == UP:
                ups.append(Rule(ProductNonterminal(a, b), sym, ProductNonterminal(c, d)))
            else:
                downs.append(Rule(ProductNonterminal(a, b), "", ProductNonterminal(c, d), sym))
    eps = [Rule(ProductNonterminal(a, b)) for a in g1.nonterminals if a in g1.finals
           for b in g2.nonterminals if b in g2.finals]
    return LinearGrammar(nonterminals, g1.terminals, tuple(ups + downs + eps),
                         ProductNonterminal(g1.start, g2.start))


def fsystem_to_linear(core: Dfa, proc: Dfa, raw: bool = False) -> LinearGrammar:
    """Linear grammar for the language of the folding system ``(core, proc)``."""
    if not set(proc.alphabet) <= set(DIRECTIONS):
        raise ProcAlphabetError(f"procedure alphabet {proc.alphabet!r} is not within {{u, d}}")
    g1 = dfa_to_rlg(dfa_reverse(core), "S")
    g2 = dfa_to_rlg(dfa_reverse(proc), "T")
    g = product_construct(g1, g2)
    return g if raw else trim(g)


def productive(g: LinearGrammar) -> set:
    prod = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.lhs not in prod and (r.mid is None or r.mid in prod):
                prod.add(r.lhs)
                changed = True
    return prod


def trim(g: LinearGrammar) -> LinearGrammar:
    """Drop nonproductive and unreachable nonterminals; the start symbol always stays."""
    prod = productive(g)
    useful_rules = [r for r in g.rules if r.lhs in prod and (r.mid is None or r.mid in prod)]
    reach = {g.start}
    todo = [g.start]
    while todo:
        a = todo.pop()
        for r in useful_rules:
            if r.lhs == a and r.mid is not None and r.mid not in reach:
                reach.add(r.mid)
                todo.append(r.mid)
    keep = (prod & reach) | {g.start}
    rules = tuple(r for r in useful_rules if r.lhs in keep)
    return LinearGrammar(tuple(a for a in g.nonterminals if a in keep), g.terminals, rules, g.start)


def enumerate_linear(g: LinearGrammar, max_len: int, cap: Optional[int] = None) -> list:
    """All words of ``L(g)`` up to ``max_len``, shortest first, then lexicographic.

    Words are built length by length: ``table[A][n]`` holds the words of length
    ``n`` derivable from ``A``.  Unit rules are closed under a fixpoint inside
    each length, so cyclic grammars terminate.
    """
    cap = enum_cap() if cap is None else cap
    if max_len > cap:
        raise CapExceeded(f"max_len {max_len} exceeds enumeration cap {cap}")
    g = trim(g)
    table = {a: [] for a in g.nonterminals}
    units = [r for r in g.rules if r.mid is not None and not r.left and not r.right]
    others = [r for r in g.rules if r not in units]
    for n in range(max_len + 1):
        layer = {a: set() for a in g.nonterminals}
        for r in others:
            k = len(r.left) + len(r.right)
            if r.mid is None:
                if k == n:
                    layer[r.lhs].add(r.left)
            elif k <= n:
                layer[r.lhs].update(r.left + x + r.right for x in table[r.mid][n - k])
        changed = True
        while changed:
            changed = False
            for r in units:
                before = len(layer[r.lhs])
                layer[r.lhs] |= layer[r.mid]
                changed |= len(layer[r.lhs]) != before
        for a in g.nonterminals:
            table[a].append(layer[a])
    return sorted(set().union(*table[g.start]), key=word_key(g.terminals))


# membership -------------------------------------------------------------------

@dataclass(frozen=True)
class _Binarized:
    count: int
    start: int
    symbols: dict
    eps: np.ndarray
    left: np.ndarray   # rows (A, a, B): A -> a B
    right: np.ndarray  # rows (A, B, a): A -> B a
    units: np.ndarray  # rows (A, B): A =>+ B through unit rules


@lru_cache(maxsize=64)
def binarize(g: LinearGrammar) -> _Binarized:
    """Rewrite to rules ``A -> aB``, ``A -> Ba``, ``A -> eps`` plus a unit-rule closure."""
    ids = {a: i for i, a in enumerate(g.nonterminals)}
    symbols = {c: i for i, c in enumerate(g.terminals)}
    count = len(ids)
    eps, left, right, unit_edges = [], [], [], set()

    def fresh():
        nonlocal count
        count += 1
        return count - 1

    for r in g.rules:
        a = ids[r.lhs]
        if r.mid is None:
            for c in r.left:
                x = fresh()
                left.append((a, symbols[c], x))
                a = x
            eps.append(a)
            continue
        for i, c in enumerate(r.left):
            x = ids[r.mid] if i == len(r.left) - 1 and not r.right else fresh()
            left.append((a, symbols[c], x))
            a = x
        for i, c in enumerate(reversed(r.right)):
            x = ids[r.mid] if i == len(r.right) - 1 else fresh()
            right.append((a, x, symbols[c]))
            a = x
        if not r.left and not r.right:
            unit_edges.add((a, ids[r.mid]))

    closure = set(unit_edges)
    while True:
        extra = {(a, c) for a, b in closure for b2, c in closure if b == b2} - closure
        if not extra:
            break
        closure |= extra
    closure = {(a, b) for a, b in closure if a != b}

    def arr(rows, width):
        return np.array(sorted(rows), dtype=np.int64).reshape(-1, width)

    return _Binarized(count, ids[g.start], symbols, np.array(eps, dtype=np.int64),
                      arr(left, 3), arr(right, 3), arr(closure, 2))


@numba.njit(cache=True)
def _close_units(table, units, width):
    for k in range(units.shape[0]):
        a = units[k, 0]
        b = units[k, 1]
        for i in range(width):
            if table[b, i]:
                table[a, i] = True


@numba.njit(cache=True)
def _span_dp(word, count, start, eps, left, right, units):
    n = word.shape[0]
    prev = np.zeros((count, n + 1), dtype=np.bool_)
    cur = np.zeros((count, n + 1), dtype=np.bool_)
    for k in range(eps.shape[0]):
        for i in range(n + 1):
            prev[eps[k], i] = True
    _close_units(prev, units, n + 1)
    for length in range(1, n + 1):
        spans = n - length + 1
        cur[:, :] = False
        for k in range(left.shape[0]):
            a = left[k, 0]
            sym = left[k, 1]
            b = left[k, 2]
            for i in range(spans):
                if word[i] == sym and prev[b, i + 1]:
                    cur[a, i] = True
        for k in range(right.shape[0]):
            a = right[k, 0]
            b = right[k, 1]
            sym = right[k, 2]
            for i in range(spans):
                if prev[b, i] and word[i + length - 1] == sym:
                    cur[a, i] = True
        _close_units(cur, units, spans)
        prev, cur = cur, prev
    return prev[start, 0]


def member_linear(g: LinearGrammar, word: str) -> bool:
    """Decide ``word in L(g)`` by dynamic programming over subword spans.

    Row ``length`` of the table says which nonterminals derive ``word[i:i+length]``;
    each step peels one terminal off either end.  Time is O(n^2 * |rules|) and
    only two rows are kept.
    """
    b = binarize(g)
    try:
        codes = np.array([b.symbols[c] for c in word], dtype=np.int64)
    except KeyError:
        return False
    return bool(_span_dp(codes, b.count, b.start, b.eps, b.left, b.right, b.units))


def normalize_right_linear(g: LinearGrammar) -> RightLinearGrammar:
    """Normal form ``A -> a B | eps`` keeping every original nonterminal.

    Terminal blocks are split through fresh nonterminals and unit rules are
    removed by copying the rules of every unit-reachable nonterminal.
    """
    if not g.is_right_linear:
        raise NotRightLinear("grammar has a rule with terminals after its nonterminal")
    names = {str(a) for a in g.nonterminals}
    counter = 0

    def fresh():
        nonlocal counter
        while f"_N{counter}" in names:
            counter += 1
        names.add(f"_N{counter}")
        return f"_N{counter}"

    nonterminals = list(g.nonterminals)
    steps, finals, units = [], set(), {a: set() for a in g.nonterminals}
    for r in g.rules:
        if r.mid is not None and not r.left:
            units[r.lhs].add(r.mid)
            continue
        if not r.left:
            finals.add(r.lhs)
            continue
        a = r.lhs
        for i, c in enumerate(r.left):
            last = i == len(r.left) - 1
            if last and r.mid is not None:
                b = r.mid
            else:
                b = fresh()
                nonterminals.append(b)
                if last:
                    finals.add(b)
            steps.append((a, c, b))
            a = b
    reach = {}
    for a in g.nonterminals:
        seen, todo = {a}, [a]
        while todo:
            for b in units[todo.pop()] - seen:
                seen.add(b)
                todo.append(b)
        reach[a] = seen
    out_steps = list(dict.fromkeys(
        (a, c, t) for a in nonterminals for b in reach.get(a, {a}) for x, c, t in steps if x == b))
    out_finals = {a for a in nonterminals if reach.get(a, {a}) & finals}
    return RightLinearGrammar(tuple(nonterminals), g.terminals, tuple(out_steps),
                              frozenset(out_finals), g.start)


def isomorphic(g: LinearGrammar, h: LinearGrammar) -> bool:
    """Equal up to a renaming of nonterminals that maps start to start."""
    if len(g.nonterminals) != len(h.nonterminals) or len(g.rules) != len(h.rules):
        return False
    if set(g.terminals) != set(h.terminals):
        return False
    target = {(r.lhs, r.left, r.mid, r.right) for r in h.rules}
    others = [a for a in h.nonterminals if a != h.start]
    rest = [a for a in g.nonterminals if a != g.start]
    for perm in permutations(others):
        m = dict(zip(rest, perm))
        m[g.start] = h.start
        mapped = {(m[r.lhs], r.left, None if r.mid is None else m[r.mid], r.right) for r in g.rules}
        if mapped == target:
            return True
    return False
