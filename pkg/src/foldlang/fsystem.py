"""Folding systems: brute-force semantics, compiled membership and bounded checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from operator import itemgetter
from pathlib import Path
from typing import Optional

from .automata import (
    Dfa, RightLinearGrammar, compile_regex, dfa_reverse, make_alphabet, rlg_start_variant,
    rlg_to_dfa, word_key, words_of_length,
)
from .errors import CapExceeded, ParseError, PreconditionViolation, ProcAlphabetError
from .folding import DIRECTIONS, fold, fold_permutation
from .linear_grammar import (
    LinearGrammar, ProductNonterminal, enumerate_linear, fsystem_to_linear, member_linear,
    parse_grammar, product_construct, right_linear_to_dfa, start_variant,
)

BRUTE_CAP = 14
REPORT_LIMIT = 20


@dataclass(frozen=True)
class FSystem:
    core: Dfa
    proc: Dfa

    def __post_init__(self):
        if not set(self.proc.alphabet) <= set(DIRECTIONS):
            raise ProcAlphabetError(f"procedure alphabet {self.proc.alphabet!r} is not within {{u, d}}")

    @classmethod
    def from_regex(cls, core: str, proc: str) -> "FSystem":
        return cls(compile_regex(core), compile_regex(proc))


def load_language(spec: str, base_dir: Optional[Path] = None) -> Dfa:
    """A regex, or ``@path`` naming a right-linear grammar file."""
    if spec.startswith("@"):
        path = Path(spec[1:])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return right_linear_to_dfa(parse_grammar(path.read_text()))
    return compile_regex(spec)


def parse_fsystem(text: str, base_dir: Optional[Path] = None) -> FSystem:
    """Read the two-line ``core: ...`` / ``proc: ...`` system file."""
    fields = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep or key.strip() not in ("core", "proc"):
            raise ParseError(f"expected 'core: ...' or 'proc: ...', got {line!r}")
        fields[key.strip()] = value.strip()
    if set(fields) != {"core", "proc"}:
        raise ParseError("system file needs both a 'core:' and a 'proc:' line")
    return FSystem(load_language(fields["core"], base_dir), load_language(fields["proc"], base_dir))


def _check_cap(max_len, cap):
    cap = BRUTE_CAP if cap is None else cap
    if max_len > cap:
        raise CapExceeded(f"max_len {max_len} exceeds brute-force cap {cap}")


def brute_language(phi: FSystem, max_len: int, cap: Optional[int] = None) -> list:
    """Fold every same-length (core word, direction word) pair up to ``max_len``."""
    _check_cap(max_len, cap)
    out = set()
    for n in range(max_len + 1):
        words = words_of_length(phi.core, n)
        if not words:
            continue
        for v in words_of_length(phi.proc, n):
            if n < 2:
                out.update(words)
                continue
            # source position of every output slot
            src = [0] * n
            for i, t in enumerate(fold_permutation(v)):
                src[t - 1] = i
            pick = itemgetter(*src)
            out.update("".join(pick(w)) for w in words)
    return sorted(out, key=word_key(phi.core.alphabet))


@lru_cache(maxsize=256)
def compiled_grammar(phi: FSystem) -> LinearGrammar:
    return fsystem_to_linear(phi.core, phi.proc)


def member_fsystem(phi: FSystem, word: str) -> bool:
    return member_linear(compiled_grammar(phi), word)


@dataclass
class EquivReport:
    max_len: int
    missing: list = field(default_factory=list)  # folded words the grammar lacks
    extra: list = field(default_factory=list)    # grammar words no fold produces
    missing_count: int = 0
    extra_count: int = 0
    system_only_symbols: list = field(default_factory=list)
    grammar_only_symbols: list = field(default_factory=list)

    @property
    def equivalent(self) -> bool:
        return self.missing_count == 0 and self.extra_count == 0

    def to_json(self) -> dict:
        return {"max_len": self.max_len, "equivalent": self.equivalent,
                "missing": self.missing, "missing_count": self.missing_count,
                "extra": self.extra, "extra_count": self.extra_count,
                "system_only_symbols": self.system_only_symbols,
                "grammar_only_symbols": self.grammar_only_symbols}


def compare_word_lists(expected, actual, max_len, alphabet=()) -> EquivReport:
    key = word_key(tuple(alphabet))
    missing = sorted(set(expected) - set(actual), key=key)
    extra = sorted(set(actual) - set(expected), key=key)
    return EquivReport(max_len, missing[:REPORT_LIMIT], extra[:REPORT_LIMIT], len(missing), len(extra))


def bounded_equiv(phi: FSystem, g: LinearGrammar, max_len: int, cap: Optional[int] = None) -> EquivReport:
    """Compare the brute-force language of ``phi`` with ``L(g)`` up to ``max_len``."""
    _check_cap(max_len, cap)
    union = make_alphabet(list(phi.core.alphabet) + [c for c in g.terminals if c not in phi.core.alphabet])
    report = compare_word_lists(brute_language(phi, max_len, cap),
                                enumerate_linear(g, max_len), max_len, union)
    report.system_only_symbols = sorted(set(phi.core.alphabet) - set(g.terminals))
    report.grammar_only_symbols = sorted(set(g.terminals) - set(phi.core.alphabet))
    return report


@dataclass
class ClaimReport:
    max_len: int
    pairs_checked: int = 0
    failures: list = field(default_factory=list)  # (pair, EquivReport)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"max_len": self.max_len, "pairs_checked": self.pairs_checked,
                "passed": self.passed,
                "failures": [{"pair": str(p), "report": r.to_json()} for p, r in self.failures]}


def claim_A_check(g1: RightLinearGrammar, g2: RightLinearGrammar, max_len: int,
                  cap: Optional[int] = None) -> ClaimReport:
    """For every nonterminal pair, the product grammar restarted there matches the
    folding system of the two reversed restarted languages (bounded check)."""
    _check_cap(max_len, cap)
    product = product_construct(g1, g2)
    cores = {a: dfa_reverse(rlg_to_dfa(rlg_start_variant(g1, a))) for a in g1.nonterminals}
    procs = {b: dfa_reverse(rlg_to_dfa(rlg_start_variant(g2, b))) for b in g2.nonterminals}
    report = ClaimReport(max_len)
    for a in g1.nonterminals:
        for b in g2.nonterminals:
            pair = ProductNonterminal(a, b)
            folded = brute_language(FSystem(cores[a], procs[b]), max_len, cap)
            derived = enumerate_linear(start_variant(product, pair), max_len)
            sub = compare_word_lists(folded, derived, max_len, g1.terminals)
            report.pairs_checked += 1
            if not sub.equivalent:
                report.failures.append((pair, sub))
    return report


@dataclass
class InterchangeReport:
    folds: dict  # (core word index, procedure index) -> folded word
    members: dict

    @property
    def holds(self) -> bool:
        return all(self.members.values())

    def to_json(self) -> dict:
        return {"folds": {f"w{i}v{j}": s for (i, j), s in self.folds.items()},
                "members": {f"w{i}v{j}": m for (i, j), m in self.members.items()},
                "holds": self.holds}


def interchange_demo(phi: FSystem, w1: str, v1: str, w2: str, v2: str) -> InterchangeReport:
    """Swap direction words between two same-length folds; both cross folds stay in L(phi)."""
    if not len(w1) == len(v1) == len(w2) == len(v2):
        raise PreconditionViolation("all four words must have the same length")
    for w in (w1, w2):
        if not phi.core.accepts(w):
            raise PreconditionViolation(f"{w!r} is not in the core language")
    for v in (v1, v2):
        if not phi.proc.accepts(v):
            raise PreconditionViolation(f"{v!r} is not in the procedure language")
    words, dirs = {1: w1, 2: w2}, {1: v1, 2: v2}
    folds = {(i, j): fold(words[i], dirs[j]) for i in (1, 2) for j in (1, 2)}
    members = {k: member_fsystem(phi, s) for k, s in folds.items()}
    return InterchangeReport(folds, members)
