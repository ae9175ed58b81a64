import re
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings

from foldlang.automata import Dfa, canonical, compile_regex, count_vector, enumerate_dfa, words_of_length
from foldlang.errors import CapExceeded, LengthMismatch, TooShort
from foldlang.folding import DIRECTIONS
from foldlang.fsystem import FSystem, bounded_equiv, brute_language
from foldlang.linear_grammar import enumerate_linear, fsystem_to_linear, member_linear, parse_grammar
from foldlang.properties import (
    THM2_ALPHABET, RefuterConfig, _first_failure, _Search, balance_check, iter_canonical_tables,
    pump_decompose, refute_bounded, thm2_language, union_demo,
)

from strategies import dfas

EPS = parse_grammar("start S\nS -> eps\n")


# the # language ---------------------------------------------------------------------

def test_thm2_grammar_shape():
    g = thm2_language()
    assert set(g.terminals) == set(THM2_ALPHABET)
    assert len(g.rules) == 6


def test_thm2_enumeration():
    assert enumerate_linear(thm2_language(), 7) == ["a#bc", "de#f", "aa#bcbc", "dede#ff"]


@pytest.mark.parametrize("word,expected", [("a#bc", True), ("de#f", True), ("a#bcbc", False), ("abc", False)])
def test_thm2_membership(word, expected):
    assert member_linear(thm2_language(), word) is expected


@pytest.mark.parametrize("word,expected", [
    ("aa#bcbc", True), ("abc", False), ("aaaa#b", False), ("a##b", False), ("a#bc", True), ("#", True),
])
def test_balance_check(word, expected):
    assert balance_check(word) is expected


def test_thm2_facts_to_16():
    for w in enumerate_linear(thm2_language(), 16):
        assert len(w) % 3 == 1 and len(w) >= 4
        assert balance_check(w)


# pumping ---------------------------------------------------------------------

def test_pump_example1():
    core, proc = compile_regex("(abc)*"), compile_regex("(udd)*")
    dec = pump_decompose(core, proc, "abc" * 6, "udd" * 6)
    assert len(dec.y1) in (3, 6, 9, 12)
    assert len(dec.y1) == len(dec.y2) > 0
    assert len(dec.x1) == len(dec.x2) and len(dec.z1) == len(dec.z2)
    assert dec.bound == core.state_count * proc.state_count
    assert dec.prefixes_live
    for k in range(4):
        w, v = dec.pumped(k)
        assert core.accepts(w) and proc.accepts(v)
        assert core.run(dec.x1 + dec.y1 * k) == core.run(dec.x1)
        assert proc.run(dec.x2 + dec.y2 * k) == proc.run(dec.x2)


def test_pump_single_state_loop():
    dec = pump_decompose(compile_regex("a*"), compile_regex("d*"), "aa", "dd")
    assert (dec.x1, dec.y1, dec.z1) == ("", "a", "a")
    assert (dec.x2, dec.y2, dec.z2) == ("", "d", "d")


def test_pump_errors():
    core, proc = compile_regex("(abc)*"), compile_regex("(udd)*")
    with pytest.raises(TooShort):
        pump_decompose(core, proc, "abc", "udd")
    with pytest.raises(LengthMismatch):
        pump_decompose(core, proc, "abc" * 6, "udd" * 5)


def test_pump_reports_dead_prefix():
    core, proc = compile_regex("(abc)*"), compile_regex("(udd)*")
    dec = pump_decompose(core, proc, "abc" * 5 + "aab", "udd" * 6)
    assert not dec.prefixes_live


@given(dfas(max_states=4), dfas(alphabet=DIRECTIONS, max_states=4))
def test_pump_loop_is_synchronized(core, proc):
    n = core.state_count * proc.state_count + 1
    w = (core.alphabet[-1] * n)
    v = ("ud" * n)[:n]
    dec = pump_decompose(core, proc, w, v)
    assert 0 < len(dec.y1) == len(dec.y2)
    assert len(dec.x1) + len(dec.y1) <= dec.bound + 1
    for k in range(4):
        assert core.run(dec.x1 + dec.y1 * k) == core.run(dec.x1)
        assert proc.run(dec.x2 + dec.y2 * k) == proc.run(dec.x2)


# refuter ---------------------------------------------------------------------

def test_canonical_tables_are_distinct_and_connected():
    tables = list(iter_canonical_tables(3, 2))
    assert len(tables) == len(set(tables))
    for t in tables:
        seen, todo = {0}, [0]
        while todo:
            for q in t[todo.pop()]:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        assert seen == {0, 1, 2}
    assert tables == sorted(tables)


def test_canonical_tables_cover_every_isomorphism_class():
    classes = set()
    for flat in product(range(2), repeat=4):
        table = (flat[:2], flat[2:])
        classes.add(canonical_table(table))
    expected = set(iter_canonical_tables(1, 2)) | set(iter_canonical_tables(2, 2))
    assert classes == expected


def canonical_table(table):
    d = canonical(Dfa(("d", "u"), table, 0, frozenset()))
    return d.delta


def test_refuter_config_cap():
    with pytest.raises(CapExceeded):
        RefuterConfig(1, 1, 15, ("a",))
    with pytest.raises(ValueError):
        RefuterConfig(0, 1, 3, ("a",))


def test_refute_thm2_small_bounds():
    out = refute_bounded(thm2_language(), RefuterConfig(1, 2, 7, THM2_ALPHABET))
    assert out.refuted
    assert out.candidates_tried > 0
    assert out.witness is None
    assert out.verdict_line() == "REFUTED bounds=(1,2,7)"


def test_refute_epsilon_needs_a_sink():
    # one total state over {a} accepts either nothing or a*, so {eps} needs two states
    assert refute_bounded(EPS, RefuterConfig(1, 1, 3, ("a",))).refuted
    out = refute_bounded(EPS, RefuterConfig(1, 2, 3, ("a",)))
    assert out.verdict == "Found"
    assert enumerate_dfa(out.witness.core, 3) == ["", "a", "aa", "aaa"]
    assert enumerate_dfa(out.witness.proc, 3) == [""]
    assert out.verdict_line().startswith("FOUND core=alphabet: a; start 0")


def test_refute_example1_refuted_below_its_size():
    target = fsystem_to_linear(compile_regex("(abc)*"), compile_regex("(udd)*"))
    assert refute_bounded(target, RefuterConfig(3, 3, 9, ("a", "b", "c"))).refuted


@pytest.mark.slow
def test_refute_example1_found_at_four_states():
    target = fsystem_to_linear(compile_regex("(abc)*"), compile_regex("(udd)*"))
    out = refute_bounded(target, RefuterConfig(4, 4, 9, ("a", "b", "c")))
    assert out.verdict == "Found"
    assert bounded_equiv(out.witness, target, 9).equivalent


@pytest.mark.parametrize("core,proc", [("a*b", "d*u"), ("(ab)*", "(ud)*"), ("ab*", "u*d")])
def test_refute_finds_generating_system_and_is_monotone(core, proc):
    phi = FSystem.from_regex(core, proc)
    target = fsystem_to_linear(phi.core, phi.proc)
    s, p = phi.core.state_count, phi.proc.state_count
    small = refute_bounded(target, RefuterConfig(s, p, 6, phi.core.alphabet))
    assert small.verdict == "Found"
    assert brute_language(small.witness, 6) == brute_language(phi, 6)
    for bigger in ((s + 1, p), (s, p + 1)):
        assert refute_bounded(target, RefuterConfig(*bigger, 6, phi.core.alphabet)).verdict == "Found"


def test_refute_parallel_matches_sequential():
    target = fsystem_to_linear(compile_regex("a*b"), compile_regex("d*u"))
    config = RefuterConfig(3, 3, 6, ("a", "b"))
    one = refute_bounded(target, config, chunk_size=4)
    two = refute_bounded(target, config, workers=2, chunk_size=4)
    assert one.verdict == two.verdict == "Found"
    assert one.witness == two.witness
    assert one.candidates_tried == two.candidates_tried

    target = fsystem_to_linear(compile_regex("(abc)*"), compile_regex("(udd)*"))
    config = RefuterConfig(2, 3, 9, ("a", "b", "c"))
    one, two = refute_bounded(target, config), refute_bounded(target, config, workers=2)
    assert one.refuted and two.refuted
    assert one.to_json() == two.to_json()


def test_refute_progress_lines():
    lines = []
    refute_bounded(thm2_language(), RefuterConfig(2, 2, 7, THM2_ALPHABET), progress=lines.append)
    assert lines[-1] == "REFUTED bounds=(2,2,7)"
    assert lines[:-1]
    for line in lines[:-1]:
        assert re.fullmatch(r"tried=\d+ pruned=\d+ elapsed=\d+\.\d", line)


def _index(v: str) -> int:
    """Position of direction word ``v`` in the length-concatenated lex layout (d < u)."""
    return (1 << len(v)) - 1 + int(v.translate(str.maketrans("du", "01")) or "0", 2)


@settings(max_examples=40)
@given(dfas(alphabet=("a", "b"), max_states=3), dfas(alphabet=DIRECTIONS, max_states=3),
       dfas(alphabet=("a", "b"), max_states=2), dfas(alphabet=DIRECTIONS, max_states=2))
def test_pruning_never_discards_a_witness(core, proc, core2, proc2):
    """Count and image filters pass every pair whose bounded language equals the target's."""
    n = 6
    reference = brute_language(FSystem(core, proc), n)
    search = _Search(fsystem_to_linear(core, proc), RefuterConfig(1, 1, n, ("a", "b")))
    for c, p in ((core, proc), (core2, proc2)):
        core_words = [words_of_length(c, k) for k in range(n + 1)]
        fail = _first_failure(np.array(count_vector(c, n)), np.array([count_vector(p, n)]),
                              search.target_counts)[0]
        allowed = np.unpackbits(search.image_mask(core_words))
        inside = all(allowed[_index(v)] for v in enumerate_dfa(p, n))
        equal = brute_language(FSystem(c, p), n) == reference
        assert search.matches(core_words, p) == equal
        if equal:
            assert fail == -1 and inside


def test_outcome_json():
    out = refute_bounded(EPS, RefuterConfig(1, 2, 3, ("a",)))
    data = out.to_json()
    assert data["verdict"] == "Found"
    assert data["bounds"] == [1, 2, 3]
    assert "core" in data and "proc" in data


# union ----------------------------------------------------------------------

def test_union_demo_small():
    r = union_demo(7)
    assert r.union == ["", "abc", "def", "aabcbc", "dedeff"]
    assert r.matches_expected
    assert not r.equals_thm2
    assert r.first_missing_from_union == "a#bc"
    assert r.first_divergence_length == 4
    assert r.first_extra_in_union == ""


def test_union_demo_cap(monkeypatch):
    monkeypatch.setenv("FOLDLANG_MAX_ENUM", "9")
    with pytest.raises(CapExceeded):
        union_demo(10)
