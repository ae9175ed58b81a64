"""Golden fixtures: the worked example of the (abc)* / (udd)* folding system."""

from .automata import compile_regex
from .fsystem import FSystem
from .linear_grammar import LinearGrammar, normalize_right_linear, parse_grammar

# right-linear grammars of the reversed languages (cba)* and (ddu)*
EXAMPLE1_G1 = """\
start S0
S0 -> eps | c S1
S1 -> b S2
S2 -> a S0
"""

EXAMPLE1_G2 = """\
start T0
T0 -> eps | d T1
T1 -> d T2
T2 -> u T0
"""

# the product grammar with nonproductive rules removed
EXAMPLE1_G = """\
start (S0,T0)
(S0,T0) -> eps | (S1,T1) c
(S1,T1) -> (S2,T2) b
(S2,T2) -> a (S0,T0)
"""


def example1_system() -> FSystem:
    return FSystem(compile_regex("(abc)*"), compile_regex("(udd)*"))


def example1_grammars():
    return (normalize_right_linear(parse_grammar(EXAMPLE1_G1)),
            normalize_right_linear(parse_grammar(EXAMPLE1_G2)))


def example1_product() -> LinearGrammar:
    return parse_grammar(EXAMPLE1_G)


def example1_words(max_len: int) -> list:
    """a^n (bc)^n for every n with 3n <= max_len."""
    return ["a" * n + "bc" * n for n in range(max_len // 3 + 1)]
