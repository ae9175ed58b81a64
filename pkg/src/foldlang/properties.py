"""The separation apparatus: a linear language outside the folding class, checked at desk scale."""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from typing import Callable, Iterator, Optional

import numpy as np

from .automata import Dfa, enum_cap, iter_words, make_alphabet, word_key, words_of_length
from .errors import CapExceeded, LengthMismatch, PreconditionViolation, TooShort
from .folding import DIRECTIONS, fold_permutation
from .fsystem import BRUTE_CAP, FSystem, bounded_equiv, brute_language, compare_word_lists
from .linear_grammar import LinearGrammar, enumerate_linear, parse_grammar

THM2_GRAMMAR = """\
start S
S -> S1 | S2
S1 -> a S1 b c | a '#' b c
S2 -> d e S2 f | d e '#' f
"""

THM2_ALPHABET = ("a", "b", "c", "d", "e", "f", "#")


def thm2_language() -> LinearGrammar:
    """Linear grammar for {a^n # (bc)^n} u {(de)^n # f^n}, n >= 1."""
    return parse_grammar(THM2_GRAMMAR)


def balance_check(word: str) -> bool:
    """Exactly one ``#`` splitting the word into halves within a factor two of each other."""
    if word.count("#") != 1:
        return False
    u1, u2 = word.split("#")
    return len(u1) <= 2 * len(u2) and len(u2) <= 2 * len(u1)


# synchronized pumping ------------------------------------------------------------

@dataclass(frozen=True)
class PumpDecomposition:
    x1: str
    y1: str
    z1: str
    x2: str
    y2: str
    z2: str
    state_count_core: int
    state_count_proc: int
    bound: int
    prefixes_live: bool  # both prefixes can still be completed to accepted words

    def pumped(self, k: int) -> tuple:
        return self.x1 + self.y1 * k + self.z1, self.x2 + self.y2 * k + self.z2

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in
                ("x1", "y1", "z1", "x2", "y2", "z2", "state_count_core", "state_count_proc",
                 "bound", "prefixes_live")}


def pump_decompose(core: Dfa, proc: Dfa, w1: str, v1: str) -> PumpDecomposition:
    """Cut ``w1``/``v1`` at the first position where the pair of automaton states repeats."""
    if len(w1) != len(v1):
        raise LengthMismatch(f"|w1|={len(w1)} but |v1|={len(v1)}")
    bound = core.state_count * proc.state_count
    if len(w1) <= bound:
        raise TooShort(f"|w1|={len(w1)} must exceed {core.state_count}*{proc.state_count}={bound}")
    seen = {}
    p, q = core.start, proc.start
    ci, pi = core.index, proc.index
    for j in range(len(w1) + 1):
        if (p, q) in seen:
            i = seen[(p, q)]
            break
        seen[(p, q)] = j
        try:
            p = core.delta[p][ci[w1[j]]]
            q = proc.delta[q][pi[v1[j]]]
        except KeyError as exc:
            raise PreconditionViolation(f"symbol {exc.args[0]!r} outside the automaton alphabet")
    live = core.run(w1) in core.live_states() and proc.run(v1) in proc.live_states()
    return PumpDecomposition(w1[:i], w1[i:j], w1[j:], v1[:i], v1[i:j], v1[j:],
                             core.state_count, proc.state_count, bound, live)


# bounded refuter -------------------------------------------------------------------

@dataclass(frozen=True)
class RefuterConfig:
    max_core_states: int
    max_proc_states: int
    max_len: int
    core_alphabet: tuple

    def __post_init__(self):
        if min(self.max_core_states, self.max_proc_states, self.max_len) < 1:
            raise ValueError("refuter bounds must be >= 1")
        if self.max_len > BRUTE_CAP:
            raise CapExceeded(f"max_len {self.max_len} exceeds brute-force cap {BRUTE_CAP}")
        object.__setattr__(self, "core_alphabet", make_alphabet(self.core_alphabet))


@dataclass
class RefuterOutcome:
    verdict: str  # "Refuted" or "Found"
    witness: Optional[FSystem]
    candidates_tried: int = 0
    prune_stats: dict = field(default_factory=dict)  # first failing length -> pairs pruned on counts
    image_pruned: int = 0    # pairs whose folds leave the target language
    duplicates: int = 0      # pairs repeating an already examined bounded language
    equiv_rejected: int = 0  # pairs that reached the exhaustive comparison and failed it
    bounds: tuple = ()

    @property
    def refuted(self) -> bool:
        return self.verdict == "Refuted"

    @property
    def pruned(self) -> int:
        return sum(self.prune_stats.values()) + self.image_pruned + self.duplicates

    def verdict_line(self) -> str:
        if self.refuted:
            return f"REFUTED bounds=({','.join(map(str, self.bounds))})"
        one_line = lambda d: d.dump().replace("\n", "; ")
        return f"FOUND core={one_line(self.witness.core)} proc={one_line(self.witness.proc)}"

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "candidates_tried": self.candidates_tried,
               "prune_stats": {str(k): v for k, v in sorted(self.prune_stats.items())},
               "image_pruned": self.image_pruned, "duplicates": self.duplicates,
               "equiv_rejected": self.equiv_rejected, "bounds": list(self.bounds)}
        if self.witness is not None:
            out["core"] = self.witness.core.dump()
            out["proc"] = self.witness.proc.dump()
        return out


def iter_canonical_tables(states: int, symbols: int) -> Iterator[tuple]:
    """Transition tables of every initially connected DFA with exactly ``states`` states.

    A table is canonical when states are numbered in order of first appearance
    scanning ``delta[0][0], delta[0][1], ...``; each isomorphism class appears
    once, in lexicographic order of the flattened table.
    """
    size = states * symbols
    flat = [0] * size

    def rec(pos, used):
        if pos == size:
            if used == states:
                yield tuple(tuple(flat[q * symbols:(q + 1) * symbols]) for q in range(states))
            return
        if pos % symbols == 0 and pos // symbols >= used:
            return
        for t in range(min(used + 1, states)):
            flat[pos] = t
            yield from rec(pos + 1, used + (t == used))

    yield from rec(0, 1)


def _reach_counts(table, max_len: int) -> np.ndarray:
    """``out[n, q]``: number of words of length n leading from state 0 to q."""
    n = len(table)
    step = np.zeros((n, n), dtype=np.int64)
    for p, row in enumerate(table):
        for q in row:
            step[p, q] += 1
    out = np.zeros((max_len + 1, n), dtype=np.int64)
    out[0, 0] = 1
    for k in range(1, max_len + 1):
        out[k] = out[k - 1] @ step
    return out


def _mask_matrix(n: int) -> np.ndarray:
    return np.array([[(m >> q) & 1 for m in range(1 << n)] for q in range(n)], dtype=np.int64)


def iter_table_counts(max_states: int, alphabet: tuple, max_len: int):
    """Yield ``(table, counts)`` in canonical order of state count, then table.

    ``counts[n, m]`` is the number of accepted words of length ``n`` when the
    accepting set is the bitmask ``m``; masks are the innermost candidate order.
    """
    for s in range(1, max_states + 1):
        masks = _mask_matrix(s)
        for table in iter_canonical_tables(s, len(alphabet)):
            yield table, _reach_counts(table, max_len) @ masks


def _mask_dfa(alphabet, table, mask) -> Dfa:
    return Dfa(alphabet, table, 0, frozenset(q for q in range(len(table)) if (mask >> q) & 1))


def _word_states(table, max_len: int) -> np.ndarray:
    """State reached by every word of length 0..max_len, lengths concatenated, words in lex order."""
    delta = np.array(table, dtype=np.int64)
    layers = [np.zeros(1, dtype=np.int64)]
    for _ in range(max_len):
        layers.append(delta[layers[-1]].reshape(-1))
    return np.concatenate(layers)


def _first_failure(c, p, t) -> np.ndarray:
    """First length where counts rule out ``L(core, proc)`` matching the target, or -1.

    ``p`` holds one row of procedure counts per candidate.  For a fixed
    direction word folding is injective, so a nonempty length needs
    ``c <= t <= c * p``; a length with no fold needs ``t == 0``.
    """
    both = (c > 0) & (p > 0)
    ok = np.where(both, (c <= t) & (t <= c * p), t == 0)
    bad = ~ok
    return np.where(bad.any(axis=1), bad.argmax(axis=1), -1)


class _Search:
    """Target data and the deduplicated procedure candidates, shared by every core."""

    def __init__(self, target: LinearGrammar, config: RefuterConfig):
        n = self.max_len = config.max_len
        self.alphabet = config.core_alphabet
        self.target_by_len = [set() for _ in range(n + 1)]
        for w in enumerate_linear(target, n):
            self.target_by_len[len(w)].add(w)
        self.target_counts = np.array([len(t) for t in self.target_by_len], dtype=np.int64)
        need = self.target_counts > 0
        # source position of each output slot, for every direction word in lex order
        self.sources = [[tuple(_sources(fold_permutation(v))) for v in iter_words(DIRECTIONS, k)]
                        for k in range(n + 1)]

        procs, counts, bits = [], [], []
        self.proc_drop = Counter()  # empty at a length the target needs
        self.proc_total = 0
        for table, table_counts in iter_table_counts(config.max_proc_states, DIRECTIONS, n):
            states = _word_states(table, n)
            for mask in range(table_counts.shape[1]):
                self.proc_total += 1
                p = table_counts[:, mask]
                bad = np.flatnonzero(need & (p < 1))
                if bad.size:
                    self.proc_drop[int(bad[0])] += 1
                    continue
                procs.append(_mask_dfa(DIRECTIONS, table, mask))
                counts.append(p)
                bits.append(np.packbits((mask >> states) & 1))
        bits = np.array(bits, dtype=np.uint8).reshape(len(procs), -1)
        # one procedure per bounded language, first in canonical order
        _, first = np.unique(bits, axis=0, return_index=True)
        keep = np.sort(first)
        self.proc_dups = len(procs) - len(keep)
        self.procs = [procs[i] for i in keep]
        self.proc_counts = np.array(counts, dtype=np.int64).reshape(-1, n + 1)[keep]
        self.proc_bits = bits[keep]

    def image_mask(self, core_words: list) -> np.ndarray:
        """Packed bitmask of the direction words whose folds of every core word stay in the target."""
        segments = []
        for k, words in enumerate(core_words):
            expected = self.target_by_len[k]
            if not words:
                segments.append(np.ones(1 << k, dtype=np.uint8))
            elif not expected:
                segments.append(np.zeros(1 << k, dtype=np.uint8))
            else:
                segments.append(np.array(
                    [all("".join(w[i] for i in src) in expected for w in words)
                     for src in self.sources[k]], dtype=np.uint8))
        return np.packbits(np.concatenate(segments))

    def matches(self, core_words: list, proc: Dfa) -> bool:
        for k, expected in enumerate(self.target_by_len):
            got = set()
            if core_words[k]:
                for v in words_of_length(proc, k):
                    src = _sources(fold_permutation(v))
                    got.update("".join(w[i] for i in src) for w in core_words[k])
            if got != expected:
                return False
        return True


def _sources(target) -> list:
    src = [0] * len(target)
    for i, t in enumerate(target):
        src[t - 1] = i
    return src


def _scan_chunk(chunk, search: _Search):
    """Evaluate a run of core tables against every procedure candidate, in order."""
    outcome = RefuterOutcome("Refuted", None)
    stats = Counter()
    overhead = sum(search.proc_drop.values()) + search.proc_dups
    need = search.target_counts > 0
    seen_languages = set()
    procs = search.procs
    for table, counts in chunk:
        # core-only test: every length the target needs must have 1..t core words
        bad = need[:, None] & ((counts < 1) | (counts > search.target_counts[:, None]))
        core_fail = np.where(bad.any(axis=0), bad.argmax(axis=0), -1)
        for mask, fail in enumerate(core_fail):
            outcome.candidates_tried += overhead
            for length, k in search.proc_drop.items():
                stats[length] += k
            outcome.duplicates += search.proc_dups
            if fail >= 0:
                outcome.candidates_tried += len(procs)
                stats[int(fail)] += len(procs)
                continue
            core = _mask_dfa(search.alphabet, table, mask)
            core_words = [words_of_length(core, k) for k in range(search.max_len + 1)]
            key = tuple(tuple(ws) for ws in core_words)
            if key in seen_languages:
                outcome.candidates_tried += len(procs)
                outcome.duplicates += len(procs)
                continue
            seen_languages.add(key)
            pair_fail = _first_failure(counts[:, mask], search.proc_counts, search.target_counts)
            candidates = np.flatnonzero(pair_fail < 0)
            image_bad = np.zeros(len(procs), dtype=bool)
            if candidates.size:
                allowed = search.image_mask(core_words)
                image_bad[candidates] = np.any(search.proc_bits[candidates] & ~allowed, axis=1)
            cutoff = len(procs)
            for i in candidates[~image_bad[candidates]]:
                if search.matches(core_words, procs[i]):
                    cutoff = int(i) + 1
                    outcome.witness = FSystem(core, procs[i])
                    break
                outcome.equiv_rejected += 1
            head = pair_fail[:cutoff]
            for length, k in zip(*np.unique(head[head >= 0], return_counts=True)):
                stats[int(length)] += int(k)
            outcome.image_pruned += int(image_bad[:cutoff].sum())
            outcome.candidates_tried += cutoff
            if outcome.witness is not None:
                outcome.prune_stats = stats
                return outcome
    outcome.prune_stats = stats
    return outcome


def refute_bounded(target: LinearGrammar, config: RefuterConfig, workers: int = 1,
                   progress: Optional[Callable[[str], None]] = None,
                   chunk_size: int = 256) -> RefuterOutcome:
    """Search all small folding systems for one matching ``target`` up to ``config.max_len``.

    Candidates are canonical total DFAs (core over ``config.core_alphabet``,
    procedures over ``{d, u}``).  A pair is discarded when per-length word
    counts rule it out, or when some accepted direction word folds a core word
    outside the target; survivors are compared exhaustively.  The first
    witness in canonical order is returned, whatever ``workers`` is.
    """
    search = _Search(target, config)
    bounds = (config.max_core_states, config.max_proc_states, config.max_len)
    total = RefuterOutcome("Refuted", None, bounds=bounds)
    total.prune_stats = Counter()
    started = time.perf_counter()
    next_report = 10_000

    def absorb(part: RefuterOutcome):
        nonlocal next_report
        total.candidates_tried += part.candidates_tried
        total.prune_stats.update(part.prune_stats)
        total.image_pruned += part.image_pruned
        total.duplicates += part.duplicates
        total.equiv_rejected += part.equiv_rejected
        if progress and total.candidates_tried >= next_report:
            progress(f"tried={total.candidates_tried} pruned={total.pruned} "
                     f"elapsed={time.perf_counter() - started:.1f}")
            next_report = (total.candidates_tried // 10_000 + 1) * 10_000
        return part.witness

    cores = iter_table_counts(config.max_core_states, config.core_alphabet, config.max_len)
    chunks = iter(lambda: list(islice(cores, chunk_size)), [])
    witness = None
    if workers <= 1:
        for chunk in chunks:
            witness = absorb(_scan_chunk(chunk, search))
            if witness:
                break
    else:
        with ProcessPoolExecutor(workers) as pool:
            while witness is None:
                batch = list(islice(chunks, workers))
                if not batch:
                    break
                futures = [pool.submit(_scan_chunk, ch, search) for ch in batch]
                for fut in futures:
                    witness = absorb(fut.result())
                    if witness:
                        break
    total.prune_stats = dict(total.prune_stats)
    if witness:
        if not bounded_equiv(witness, target, config.max_len).equivalent:
            raise AssertionError("refuter witness failed the bounded equivalence check")
        total.verdict, total.witness = "Found", witness
    if progress:
        progress(total.verdict_line())
    return total


# union non-closure -----------------------------------------------------------------

@dataclass
class UnionReport:
    max_len: int
    union: list
    expected: list
    thm2_words: list
    first_missing_from_union: Optional[str]  # first word of the # language not in the union
    first_extra_in_union: Optional[str]

    @property
    def matches_expected(self) -> bool:
        return self.union == self.expected

    @property
    def equals_thm2(self) -> bool:
        return self.union == self.thm2_words

    @property
    def first_divergence_length(self) -> Optional[int]:
        w = self.first_missing_from_union
        return None if w is None else len(w)

    def to_json(self) -> dict:
        return {"max_len": self.max_len, "union": self.union,
                "matches_expected": self.matches_expected, "equals_thm2": self.equals_thm2,
                "first_missing_from_union": self.first_missing_from_union,
                "first_divergence_length": self.first_divergence_length,
                "first_extra_in_union": self.first_extra_in_union}


def union_demo(max_len: int) -> UnionReport:
    """Union of the two folding systems set against the # language."""
    cap = enum_cap()
    if max_len > cap:
        raise CapExceeded(f"max_len {max_len} exceeds enumeration cap {cap}")
    key = word_key(THM2_ALPHABET)
    # each system has a single core word and a single direction word per length,
    # so the brute-force cap may be lifted to the enumeration cap
    left = brute_language(FSystem.from_regex("(abc)*", "(udd)*"), max_len, cap=cap)
    right = brute_language(FSystem.from_regex("(edf)*", "(uud)*"), max_len, cap=cap)
    union = sorted(set(left) | set(right), key=key)
    expected = sorted({"a" * k + "bc" * k for k in range(max_len // 3 + 1)}
                      | {"de" * k + "f" * k for k in range(max_len // 3 + 1)}, key=key)
    thm2 = enumerate_linear(thm2_language(), max_len)
    diff = compare_word_lists(thm2, union, max_len, THM2_ALPHABET)
    return UnionReport(max_len, union, expected, thm2,
                       diff.missing[0] if diff.missing else None,
                       diff.extra[0] if diff.extra else None)
