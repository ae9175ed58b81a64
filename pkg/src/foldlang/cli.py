"""Command-line front-end.

Exit status: 0 success (accepted, equivalent, refuted as expected), 1 mismatch
or rejection or a witness found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .automata import enumerate_dfa
from .errors import AlphabetMismatch, FoldlangError
from .fixtures import example1_product, example1_system, example1_words
from .folding import fold, fold_permutation, parse_directions, unfold
from .fsystem import (
    FSystem, bounded_equiv, claim_A_check, compiled_grammar, load_language,
)
from .linear_grammar import (
    enumerate_linear, fsystem_to_linear, isomorphic, member_linear, normalize_right_linear,
    parse_grammar,
)
from .properties import (
    RefuterConfig, balance_check, pump_decompose, refute_bounded, thm2_language, union_demo,
)


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: str, data) -> None:
        if self.as_json:
            print(json.dumps(data, sort_keys=True))
        else:
            print(text)


def _read_grammar(path: str):
    return parse_grammar(Path(path).read_text())


def _check_word(word: str, alphabet, what="word") -> str:
    stray = sorted(set(word) - set(alphabet))
    if stray:
        raise AlphabetMismatch(f"{what} {word!r} uses symbols {stray} outside the alphabet {''.join(alphabet)!r}")
    return word


def _system(args) -> FSystem:
    if not (args.core and args.proc):
        raise FoldlangError("both --core and --proc are required")
    return FSystem(load_language(args.core), load_language(args.proc))


# subcommands -----------------------------------------------------------------------

def cmd_fold(args, out):
    s = fold(args.word, parse_directions(args.dirs))
    out.emit(s, {"word": args.word, "dirs": args.dirs, "result": s})
    return 0


def cmd_unfold(args, out):
    w = unfold(args.word, parse_directions(args.dirs))
    out.emit(w, {"word": args.word, "dirs": args.dirs, "result": w})
    return 0


def cmd_perm(args, out):
    target = fold_permutation(args.dirs)
    out.emit(" ".join(map(str, target)), {"dirs": args.dirs, "base": 1, "target": list(target)})
    return 0


def cmd_compile(args, out):
    phi = _system(args)
    g = fsystem_to_linear(phi.core, phi.proc, raw=args.raw)
    out.emit(g.to_text().rstrip("\n"), g.to_json())
    return 0


def _grammar_or_system(args):
    if args.grammar:
        return _read_grammar(args.grammar)
    return compiled_grammar(_system(args))


def cmd_member(args, out):
    g = _grammar_or_system(args)
    _check_word(args.word, g.terminals)
    ok = member_linear(g, args.word)
    out.emit("true" if ok else "false", {"word": args.word, "member": ok})
    return 0 if ok else 1


def cmd_enum(args, out):
    if args.regex:
        d = load_language(args.regex)
        words = enumerate_dfa(d, args.max_len)
    else:
        words = enumerate_linear(_grammar_or_system(args), args.max_len)
    out.emit("\n".join(w if w else "eps" for w in words), {"max_len": args.max_len, "words": words})
    return 0


def cmd_equiv(args, out):
    report = bounded_equiv(_system(args), _read_grammar(args.grammar), args.max_len)
    lines = [f"{'EQUIVALENT' if report.equivalent else 'DIFFERENT'} up to length {args.max_len}"]
    if report.missing_count:
        lines.append(f"missing ({report.missing_count}): " + " ".join(w or "eps" for w in report.missing))
    if report.extra_count:
        lines.append(f"extra ({report.extra_count}): " + " ".join(w or "eps" for w in report.extra))
    if report.system_only_symbols or report.grammar_only_symbols:
        lines.append(f"symbols only in system: {''.join(report.system_only_symbols)}; "
                     f"only in grammar: {''.join(report.grammar_only_symbols)}")
    out.emit("\n".join(lines), report.to_json())
    return 0 if report.equivalent else 1


def cmd_claim_a(args, out):
    g1 = normalize_right_linear(_read_grammar(args.g1))
    g2 = normalize_right_linear(_read_grammar(args.g2))
    report = claim_A_check(g1, g2, args.max_len)
    lines = [f"pairs checked: {report.pairs_checked}",
             f"{'PASS' if report.passed else 'FAIL'}"]
    lines += [f"failing pair {p}" for p, _ in report.failures]
    out.emit("\n".join(lines), report.to_json())
    return 0 if report.passed else 1


def cmd_pump(args, out):
    phi = _system(args)
    _check_word(args.word, phi.core.alphabet)
    parse_directions(args.dirs)
    dec = pump_decompose(phi.core, phi.proc, args.word, args.dirs)
    text = (f"x1={dec.x1!r} y1={dec.y1!r} z1={dec.z1!r}\n"
            f"x2={dec.x2!r} y2={dec.y2!r} z2={dec.z2!r}\n"
            f"N1={dec.state_count_core} N2={dec.state_count_proc} N={dec.bound} "
            f"prefixes_live={dec.prefixes_live}")
    out.emit(text, dec.to_json())
    return 0


def cmd_refute(args, out):
    target = _read_grammar(args.target)
    config = RefuterConfig(args.core_states, args.proc_states, args.max_len, tuple(args.alphabet))
    progress = (lambda line: print(line, file=sys.stderr)) if not args.quiet else None
    outcome = refute_bounded(target, config, workers=args.workers, progress=progress)
    out.emit(outcome.verdict_line(), outcome.to_json())
    return 0 if outcome.refuted else 1


# demos -----------------------------------------------------------------------------

def demo_example1():
    phi = example1_system()
    g = fsystem_to_linear(phi.core, phi.proc)
    checks = [("grammar isomorphic to the worked example", isomorphic(g, example1_product())),
              ("enumeration to 18 equals a^n (bc)^n", enumerate_linear(g, 18) == example1_words(18)),
              ("bounded equivalence with brute force to 9", bounded_equiv(phi, g, 9).equivalent)]
    return g.to_text().rstrip("\n").splitlines(), checks


def demo_thm2():
    g = thm2_language()
    words = enumerate_linear(g, 22)
    checks = [("lengths are 1 mod 3 and at least 4", all(len(w) % 3 == 1 and len(w) >= 4 for w in words)),
              ("exactly one # per word", all(w.count("#") == 1 for w in words)),
              ("balance inequalities hold", all(balance_check(w) for w in words)),
              ("membership of a#bc and de#f", member_linear(g, "a#bc") and member_linear(g, "de#f")),
              ("a#bcbc rejected", not member_linear(g, "a#bcbc"))]
    return [f"{len(words)} words up to length 22"], checks


def demo_union():
    r = union_demo(18)
    info = [f"union: {' '.join(w or 'eps' for w in r.union)}",
            f"first word of the linear language missing from the union: {r.first_missing_from_union}"]
    checks = [("union equals a^n (bc)^n + (de)^n f^n", r.matches_expected),
              ("union differs from the # language", not r.equals_thm2),
              ("first divergence is a#bc at length 4",
               r.first_missing_from_union == "a#bc" and r.first_divergence_length == 4)]
    return info, checks


DEMOS = {"example1": demo_example1, "thm2": demo_thm2, "union": demo_union}


def cmd_demo(args, out):
    info, checks = DEMOS[args.name]()
    ok = all(passed for _, passed in checks)
    lines = list(info) + [f"{'PASS' if p else 'FAIL'}  {name}" for name, p in checks]
    lines.append("PASS" if ok else "FAIL")
    out.emit("\n".join(lines), {"demo": args.name, "info": info,
                                "checks": [{"name": n, "passed": p} for n, p in checks], "passed": ok})
    return 0 if ok else 1


# parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="foldlang", description="Folding systems over regular languages.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def system_flags(sp, required=False):
        sp.add_argument("--core", required=required, help="regex or @grammar-file")
        sp.add_argument("--proc", required=required, help="regex over {u,d} or @grammar-file")

    for name, fn in (("fold", cmd_fold), ("unfold", cmd_unfold)):
        sp = sub.add_parser(name)
        sp.add_argument("word")
        sp.add_argument("dirs")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("perm")
    sp.add_argument("dirs")
    sp.set_defaults(func=cmd_perm)

    sp = sub.add_parser("compile")
    system_flags(sp, required=True)
    sp.add_argument("--raw", action="store_true", help="skip trimming")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("member")
    sp.add_argument("--grammar")
    system_flags(sp)
    sp.add_argument("word")
    sp.set_defaults(func=cmd_member)

    sp = sub.add_parser("enum")
    sp.add_argument("--grammar")
    sp.add_argument("--regex")
    system_flags(sp)
    sp.add_argument("--max-len", type=int, required=True)
    sp.set_defaults(func=cmd_enum)

    sp = sub.add_parser("equiv")
    system_flags(sp, required=True)
    sp.add_argument("--grammar", required=True)
    sp.add_argument("--max-len", type=int, required=True)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("claim-a")
    sp.add_argument("--g1", required=True)
    sp.add_argument("--g2", required=True)
    sp.add_argument("--max-len", type=int, required=True)
    sp.set_defaults(func=cmd_claim_a)

    sp = sub.add_parser("pump")
    system_flags(sp, required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--dirs", required=True)
    sp.set_defaults(func=cmd_pump)

    sp = sub.add_parser("refute")
    sp.add_argument("--target", required=True)
    sp.add_argument("--core-states", type=int, required=True)
    sp.add_argument("--proc-states", type=int, required=True)
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--quiet", action="store_true", help="suppress progress lines")
    sp.set_defaults(func=cmd_refute)

    sp = sub.add_parser("demo")
    sp.add_argument("name", choices=sorted(DEMOS))
    sp.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("member", "enum"):
        sources = [bool(args.grammar), bool(args.core or args.proc)]
        if args.command == "enum":
            sources.append(bool(args.regex))
        if sum(sources) != 1:
            parser.error(f"{args.command}: give exactly one language source")
    try:
        return args.func(args, Output(args.json))
    except (FoldlangError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
