import pytest
from hypothesis import given

from foldlang.automata import (
    Dfa, compile_regex, count_vector, count_words, dfa_equiv, dfa_intersect, dfa_reverse,
    dfa_to_rlg, enumerate_dfa, iter_words, length_filter, minimize, rlg_to_dfa, with_alphabet,
    words_of_length,
)
from foldlang.errors import AlphabetMismatch, CapExceeded, InvalidResidue, ParseError

from strategies import dfas


def brute_words(d, max_len):
    """Oracle: filter every word over the alphabet through the automaton."""
    return [w for n in range(max_len + 1) for w in iter_words(d.alphabet, n) if d.accepts(w)]


# compile_regex

def test_regex_star_of_block():
    d = compile_regex("(abc)*")
    assert d.alphabet == ("a", "b", "c")
    assert enumerate_dfa(d, 9) == ["", "abc", "abcabc", "abcabcabc"]
    assert not d.accepts("ab")


def test_regex_empty_group_is_epsilon():
    d = compile_regex("()")
    assert enumerate_dfa(d, 5) == [""]


def test_regex_direction_language():
    d = compile_regex("(udd)*")
    assert d.alphabet == ("d", "u")
    assert enumerate_dfa(d, 6) == ["", "udd", "uddudd"]


@pytest.mark.parametrize("text,words", [
    ("a|b", ["a", "b"]),
    ("ab?", ["a", "ab"]),
    ("a+", ["a", "aa", "aaa"]),
    ("a|", ["", "a"]),
    (r"\*a", ["*a"]),
    ("(a|b)(a|b)", ["aa", "ab", "ba", "bb"]),
])
def test_regex_operators(text, words):
    assert enumerate_dfa(compile_regex(text), 3) == words


@pytest.mark.parametrize("text,pos", [("(ab", 0), ("a)", 1), ("*a", 0), ("a b", 1), ("ab\\", 2)])
def test_regex_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        compile_regex(text)
    assert err.value.position == pos


def test_regex_alphabet_hint():
    d = compile_regex("a*", alphabet="ab")
    assert d.alphabet == ("a", "b")
    assert not d.accepts("ab")
    with pytest.raises(AlphabetMismatch):
        compile_regex("(abc)*", alphabet="ab")


def test_dfa_is_total_and_validated():
    with pytest.raises(ValueError):
        Dfa(("a", "b"), ((0,),), 0, frozenset())
    with pytest.raises(ValueError):
        Dfa(("a",), ((1,),), 0, frozenset())


def test_dump_format():
    text = compile_regex("a").dump().splitlines()
    assert text[:3] == ["alphabet: a", "start 0", "accept 1"]
    assert "0 a -> 1" in text


# dfa_reverse

def test_reverse_of_example_core():
    assert enumerate_dfa(dfa_reverse(compile_regex("(abc)*")), 9) == ["", "cba", "cbacba", "cbacbacba"]


def test_reverse_epsilon():
    assert enumerate_dfa(dfa_reverse(compile_regex("()")), 4) == [""]


def test_reverse_finite_language():
    d = compile_regex("ab|b")
    expected = sorted(w[::-1] for w in brute_words(d, 4))
    assert sorted(enumerate_dfa(dfa_reverse(d), 4)) == expected == ["b", "ba"]


# dfa_intersect

def test_intersect_with_universal():
    d = compile_regex("(abc)*")
    assert dfa_equiv(dfa_intersect(d, Dfa.universal("abc")), d)


def test_intersect_with_wrong_lengths_is_empty():
    d = dfa_intersect(compile_regex("(abc)*"), length_filter("abc", 3, 1, 0))
    assert brute_words(d, 12) == []


def test_intersect_finite():
    d = dfa_intersect(compile_regex("a*", alphabet="ab"), compile_regex("(a|b)(a|b)"))
    assert enumerate_dfa(d, 3) == ["aa"]


def test_intersect_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        dfa_intersect(compile_regex("a*"), compile_regex("b*"))


# length_filter

def test_length_filter_three_i_plus_one():
    d = length_filter("ab", 3, 1, 4)
    lengths = sorted({len(w) for w in enumerate_dfa(d, 13)})
    assert lengths == [4, 7, 10, 13]


def test_length_filter_trivial():
    assert dfa_equiv(length_filter("ab", 1, 0, 0), Dfa.universal("ab"))


def test_length_filter_even():
    words = enumerate_dfa(length_filter("ab", 2, 0, 2), 5)
    assert words == [w for w in brute_words(Dfa.universal("ab"), 5) if len(w) % 2 == 0 and len(w) >= 2]


@pytest.mark.parametrize("args", [(0, 0, 0), (3, 3, 0), (2, -1, 0)])
def test_length_filter_invalid(args):
    with pytest.raises(InvalidResidue):
        length_filter("a", *args)


# dfa_to_rlg

def test_rlg_of_reversed_core_matches_worked_grammar():
    g = dfa_to_rlg(compile_regex("(cba)*"))
    assert g.nonterminals == ("S0", "S1", "S2")
    assert set(g.steps) == {("S0", "c", "S1"), ("S1", "b", "S2"), ("S2", "a", "S0")}
    assert g.finals == {"S0"}


def test_rlg_of_reversed_procedure():
    g = dfa_to_rlg(compile_regex("(ddu)*"), "T")
    assert set(g.steps) == {("T0", "d", "T1"), ("T1", "d", "T2"), ("T2", "u", "T0")}
    assert g.finals == {"T0"}


def test_rlg_of_empty_language():
    g = dfa_to_rlg(Dfa.empty("ab"))
    assert g.nonterminals == ("S0",) and not g.steps and not g.finals


def test_rlg_keep_dead_includes_sink():
    g = dfa_to_rlg(compile_regex("(cba)*"), keep_dead=True)
    assert len(g.nonterminals) == 4


# enumerate_dfa / count_words

def test_enumerate_examples():
    assert enumerate_dfa(compile_regex("(abc)*"), 7) == ["", "abc", "abcabc"]
    assert enumerate_dfa(Dfa.empty("ab"), 10) == []


def test_enumerate_cap(monkeypatch):
    with pytest.raises(CapExceeded):
        enumerate_dfa(compile_regex("a*"), 25)
    monkeypatch.setenv("FOLDLANG_MAX_ENUM", "30")
    assert len(enumerate_dfa(compile_regex("a*"), 25)) == 26


def test_count_examples():
    assert count_words(compile_regex("(abc)*"), 6) == 1
    assert count_words(compile_regex("(a|b)*"), 3) == 8
    assert count_words(compile_regex("a+"), 0) == 0
    assert count_words(compile_regex("a*"), 0) == 1


def test_equiv_examples():
    d = compile_regex("(abc)*")
    assert dfa_equiv(d, dfa_reverse(dfa_reverse(d)))
    assert dfa_equiv(d, compile_regex("(abc)*abc|()"))
    assert not dfa_equiv(d, compile_regex("(acb)*"))
    assert compile_regex("(acb)*").accepts("acb") and not d.accepts("acb")


# properties

@given(dfas())
def test_enumeration_agrees_with_brute_force_and_counts(d):
    words = enumerate_dfa(d, 6)
    assert words == brute_words(d, 6)
    counts = count_vector(d, 6)
    for k in range(7):
        assert sum(1 for w in words if len(w) == k) == counts[k] == count_words(d, k)


@given(dfas())
def test_reverse_is_an_involution(d):
    assert dfa_equiv(dfa_reverse(dfa_reverse(d)), minimize(d))


@given(dfas())
def test_reverse_reverses_words(d):
    assert set(enumerate_dfa(dfa_reverse(d), 6)) == {w[::-1] for w in enumerate_dfa(d, 6)}


@given(dfas())
def test_rlg_round_trip(d):
    assert dfa_equiv(rlg_to_dfa(dfa_to_rlg(d)), d)


@given(dfas(alphabet=("a", "b")), dfas(alphabet=("a", "b")))
def test_intersection_is_set_intersection(d1, d2):
    both = enumerate_dfa(dfa_intersect(d1, d2), 6)
    assert set(both) == set(enumerate_dfa(d1, 6)) & set(enumerate_dfa(d2, 6))


@given(dfas())
def test_minimize_preserves_language_and_is_canonical(d):
    m = minimize(d)
    assert m.state_count <= d.state_count
    assert enumerate_dfa(m, 6) == enumerate_dfa(d, 6)
    assert minimize(m) == m


@given(dfas(alphabet=("a",)))
def test_with_alphabet_adds_only_rejected_words(d):
    e = with_alphabet(d, ("a", "b"))
    assert enumerate_dfa(e, 5) == enumerate_dfa(d, 5)


def test_words_of_length_order():
    assert words_of_length(Dfa.universal(("b", "a")), 2) == ["bb", "ba", "ab", "aa"]
