"""Regex front-end: a small dialect compiled to an NFA by Thompson's construction.

Dialect: literal symbols, grouping ``( )``, union ``|``, postfix ``*``, ``+``
and ``?``, and backslash escapes.  ``()`` and empty union branches denote the
empty word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import ParseError

SPECIAL = set("()|*+?\\")


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Literal:
    symbol: str


@dataclass(frozen=True)
class Concat:
    children: tuple


@dataclass(frozen=True)
class Union_:
    children: tuple


@dataclass(frozen=True)
class Star:
    child: object


@dataclass(frozen=True)
class Plus:
    child: object


@dataclass(frozen=True)
class Optional_:
    child: object


RegexAst = Union[Empty, Epsilon, Literal, Concat, Union_, Star, Plus, Optional_]


def valid_symbol(ch: str) -> bool:
    return len(ch) == 1 and ch.isprintable() and not ch.isspace()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> RegexAst:
        node = self.union()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return node

    def union(self):
        branches = [self.concat()]
        while self.peek() == "|":
            self.pos += 1
            branches.append(self.concat())
        if len(branches) == 1:
            return branches[0]
        return Union_(tuple(branches))

    def concat(self):
        items = []
        while self.peek() is not None and self.peek() not in "|)":
            items.append(self.postfix())
        if not items:
            return Epsilon()
        if len(items) == 1:
            return items[0]
        return Concat(tuple(items))

    def postfix(self):
        node = self.atom()
        while self.peek() is not None and self.peek() in "*+?":
            op = self.text[self.pos]
            self.pos += 1
            node = {"*": Star, "+": Plus, "?": Optional_}[op](node)
        return node

    def atom(self):
        ch = self.peek()
        start = self.pos
        if ch == "(":
            self.pos += 1
            node = self.union()
            if self.peek() != ")":
                raise ParseError("unbalanced '('", start)
            self.pos += 1
            return node
        if ch in ("*", "+", "?"):
            raise ParseError(f"nothing to repeat before {ch!r}", start)
        if ch == "\\":
            self.pos += 1
            ch = self.peek()
            if ch is None:
                raise ParseError("dangling escape", start)
        if not valid_symbol(ch):
            raise ParseError(f"invalid symbol {ch!r}", self.pos)
        self.pos += 1
        return Literal(ch)


def parse_regex(text: str) -> RegexAst:
    return _Parser(text).parse()


def literals(node) -> set:
    if isinstance(node, Literal):
        return {node.symbol}
    if isinstance(node, (Concat, Union_)):
        return set().union(*(literals(c) for c in node.children))
    if isinstance(node, (Star, Plus, Optional_)):
        return literals(node.child)
    return set()


def thompson(node):
    """Return ``(state_count, start, accept, transitions)``; label ``None`` is epsilon."""
    transitions = []
    count = 0

    def new():
        nonlocal count
        count += 1
        return count - 1

    def build(n):
        s, f = new(), new()
        if isinstance(n, Empty):
            pass
        elif isinstance(n, Epsilon):
            transitions.append((s, None, f))
        elif isinstance(n, Literal):
            transitions.append((s, n.symbol, f))
        elif isinstance(n, Concat):
            prev = s
            for child in n.children:
                cs, cf = build(child)
                transitions.append((prev, None, cs))
                prev = cf
            transitions.append((prev, None, f))
        elif isinstance(n, Union_):
            for child in n.children:
                cs, cf = build(child)
                transitions.append((s, None, cs))
                transitions.append((cf, None, f))
        elif isinstance(n, (Star, Plus, Optional_)):
            cs, cf = build(n.child)
            transitions.append((s, None, cs))
            transitions.append((cf, None, f))
            if not isinstance(n, Plus):
                transitions.append((s, None, f))
            if not isinstance(n, Optional_):
                transitions.append((cf, None, cs))
        else:
            raise TypeError(f"not a regex node: {n!r}")
        return s, f

    start, accept = build(node)
    return count, start, accept, transitions
