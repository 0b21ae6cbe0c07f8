"""Tiny regex-to-DFA compiler for fixtures: literals, concatenation, ``|``, ``*``, parentheses."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from learngame.dfa import Dfa


class RegexParseError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


@dataclass
class _Nfa:
    eps: list[set[int]] = field(default_factory=list)
    edges: list[dict[str, set[int]]] = field(default_factory=list)

    def new(self) -> int:
        self.eps.append(set())
        self.edges.append({})
        return len(self.eps) - 1


class _Parser:
    def __init__(self, pattern: str, alphabet: Sequence[str]):
        self.s = pattern
        self.i = 0
        self.alphabet = set(alphabet)
        self.nfa = _Nfa()

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else None

    def parse(self) -> tuple[int, int]:
        if not self.s:
            raise RegexParseError("empty pattern", 0)
        frag = self.expr()
        if self.i != len(self.s):
            raise RegexParseError(f"unexpected {self.s[self.i]!r}", self.i)
        return frag

    def expr(self) -> tuple[int, int]:
        frags = [self.term()]
        while self.peek() == "|":
            self.i += 1
            frags.append(self.term())
        if len(frags) == 1:
            return frags[0]
        start, end = self.nfa.new(), self.nfa.new()
        for a, b in frags:
            self.nfa.eps[start].add(a)
            self.nfa.eps[b].add(end)
        return start, end

    def term(self) -> tuple[int, int]:
        frags = []
        while self.peek() not in (None, "|", ")"):
            frags.append(self.factor())
        if not frags:
            raise RegexParseError("empty alternative", self.i)
        start, end = frags[0]
        for a, b in frags[1:]:
            self.nfa.eps[end].add(a)
            end = b
        return start, end

    def factor(self) -> tuple[int, int]:
        frag = self.atom()
        while self.peek() == "*":
            self.i += 1
            a, b = frag
            start, end = self.nfa.new(), self.nfa.new()
            self.nfa.eps[start] |= {a, end}
            self.nfa.eps[b] |= {a, end}
            frag = start, end
        return frag

    def atom(self) -> tuple[int, int]:
        c = self.peek()
        if c == "(":
            open_at = self.i
            self.i += 1
            frag = self.expr()
            if self.peek() != ")":
                raise RegexParseError("unclosed '('", open_at)
            self.i += 1
            return frag
        if c == "*":
            raise RegexParseError("'*' with nothing to repeat", self.i)
        if c not in self.alphabet:
            raise RegexParseError(f"symbol {c!r} not in alphabet", self.i)
        self.i += 1
        start, end = self.nfa.new(), self.nfa.new()
        self.nfa.edges[start][c] = {end}
        return start, end


def _closure(nfa: _Nfa, states) -> frozenset[int]:
    seen = set(states)
    stack = list(states)
    while stack:
        q = stack.pop()
        for t in nfa.eps[q]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def compile_regex(pattern: str, alphabet: Sequence[str] | None = None) -> Dfa:
    """Thompson construction followed by subset construction.

    The alphabet defaults to the sorted literals of the pattern. States are
    numbered in breadth-first order from the initial state; the empty subset
    becomes an explicit sink.
    """
    if alphabet is None:
        alphabet = sorted({c for c in pattern if c not in "()|*"})
    alphabet = tuple(alphabet)
    parser = _Parser(pattern, alphabet)
    start, final = parser.parse()
    nfa = parser.nfa

    init = _closure(nfa, [start])
    index = {init: 0}
    order = [init]
    delta: list[list[int]] = []
    queue = deque([init])
    while queue:
        subset = queue.popleft()
        row = []
        for a in alphabet:
            moved = set()
            for q in subset:
                moved |= nfa.edges[q].get(a, set())
            target = _closure(nfa, moved)
            if target not in index:
                index[target] = len(order)
                order.append(target)
                queue.append(target)
            row.append(index[target])
        delta.append(row)
    accepting = tuple(final in subset for subset in order)
    return Dfa(alphabet, accepting, tuple(tuple(r) for r in delta))
