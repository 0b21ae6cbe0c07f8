"""DFAs and the DFA learning games: standard, counterexample-size, restricted."""

from __future__ import annotations

import enum
import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from learngame.core import END, GameInstance, Learner, Move, StepBoundCertificate, Teacher


class UnknownSymbol(ValueError):
    pass


class DfaFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Dfa:
    """Moore automaton with boolean output; states are ``0..n-1``.

    ``delta[q][i]`` is the successor of ``q`` on ``alphabet[i]``.
    """

    alphabet: tuple[str, ...]
    accepting: tuple[bool, ...]
    delta: tuple[tuple[int, ...], ...]
    initial: int = 0
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.accepting)
        if n == 0:
            raise ValueError("a DFA needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"duplicate symbols in alphabet {self.alphabet}")
        if len(self.delta) != n or any(len(row) != len(self.alphabet) for row in self.delta):
            raise ValueError("transition table does not match states x alphabet")
        if not 0 <= self.initial < n or any(not 0 <= t < n for row in self.delta for t in row):
            raise ValueError("state index out of range")
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.alphabet)})

    @property
    def n_states(self) -> int:
        return len(self.accepting)

    def symbol_index(self, a: str) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise UnknownSymbol(f"symbol {a!r} not in alphabet {self.alphabet}") from None

    def run_from(self, q: int, w: str) -> int:
        for a in w:
            q = self.delta[q][self.symbol_index(a)]
        return q


def accepts(m: Dfa, w: str) -> bool:
    return m.accepting[m.run_from(m.initial, w)]


def product_bfs(init, alphabet, step, differs) -> str | None:
    """Shortlex-least word leading the pair automaton from ``init`` to a differing pair.

    ``step(pair, symbol_position)`` gives the successor pair for the symbol at that
    position of the sorted alphabet; ``differs(pair)`` marks a distinguishing pair.
    Shared by the DFA and Mealy teachers.
    """
    order = sorted(range(len(alphabet)), key=lambda i: alphabet[i])
    parent = {init: None}
    queue = deque([init])
    while queue:
        p = queue.popleft()
        if differs(p):
            word = []
            while parent[p] is not None:
                p, a = parent[p]
                word.append(a)
            return "".join(reversed(word))
        for i in order:
            nxt = step(p, i)
            if nxt not in parent:
                parent[nxt] = (p, alphabet[i])
                queue.append(nxt)
    return None


def _check_same_alphabet(a1: Sequence[str], a2: Sequence[str]) -> None:
    if set(a1) != set(a2):
        raise ValueError(f"alphabets differ: {tuple(a1)} vs {tuple(a2)}")


def shortest_counterexample(m1: Dfa, m2: Dfa) -> str | None:
    """Shortest word (shortlex-least among those) on which the languages differ, else None."""
    _check_same_alphabet(m1.alphabet, m2.alphabet)
    alphabet = m1.alphabet
    remap = [m2.symbol_index(a) for a in alphabet]

    def step(p, i):
        return m1.delta[p[0]][i], m2.delta[p[1]][remap[i]]

    def differs(p):
        return m1.accepting[p[0]] != m2.accepting[p[1]]

    return product_bfs((m1.initial, m2.initial), alphabet, step, differs)


@lru_cache(maxsize=1 << 16)
def equivalent(m1: Dfa, m2: Dfa) -> bool:
    return shortest_counterexample(m1, m2) is None


def words_up_to(alphabet: Sequence[str], max_len: int) -> Iterator[str]:
    """All words of length <= max_len in shortlex order."""
    symbols = sorted(alphabet)
    for n in range(max_len + 1):
        for t in itertools.product(symbols, repeat=n):
            yield "".join(t)


# -- construction helpers -----------------------------------------------------

def constant_dfa(alphabet: Sequence[str], accept: bool) -> Dfa:
    return Dfa(tuple(alphabet), (accept,), (tuple(0 for _ in alphabet),))


def singleton_dfa(w: str, alphabet: Sequence[str]) -> Dfa:
    """DFA for the language {w}: a spine of |w| + 1 states plus a sink."""
    alphabet = tuple(alphabet)
    n = len(w)
    sink = n + 1
    delta = []
    for i in range(n + 1):
        row = [sink] * len(alphabet)
        if i < n:
            if w[i] not in alphabet:
                raise UnknownSymbol(f"symbol {w[i]!r} not in alphabet {alphabet}")
            row[alphabet.index(w[i])] = i + 1
        delta.append(tuple(row))
    delta.append(tuple([sink] * len(alphabet)))
    accepting = tuple(i == n for i in range(n + 2))
    return Dfa(alphabet, accepting, tuple(delta))


def _is_canonical(delta: Sequence[Sequence[int]], k: int, n_sym: int) -> bool:
    # states must be numbered in BFS discovery order from 0
    order = [0]
    seen = {0}
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for a in range(n_sym):
            t = delta[q][a]
            if t not in seen:
                if t != len(order):
                    return False
                seen.add(t)
                order.append(t)
    return len(order) == k


def enumerate_dfas(max_states: int, alphabet: Sequence[str]) -> list[Dfa]:
    """All reachable DFAs with at most ``max_states`` states, in canonical numbering.

    Ordered by state count, then lexicographically by (transition table, outputs).
    """
    alphabet = tuple(alphabet)
    n_sym = len(alphabet)
    out = []
    for k in range(1, max_states + 1):
        for flat in itertools.product(range(k), repeat=k * n_sym):
            delta = tuple(tuple(flat[q * n_sym:(q + 1) * n_sym]) for q in range(k))
            if not _is_canonical(delta, k, n_sym):
                continue
            for outputs in itertools.product((False, True), repeat=k):
                out.append(Dfa(alphabet, outputs, delta))
    return out


def parse_class_spec(spec: str) -> tuple[int, tuple[str, ...]]:
    """``'2-states-a'`` -> (2, ('a',)); ``'3-states-ab'`` -> (3, ('a', 'b'))."""
    try:
        k, word, symbols = spec.split("-", 2)
        if word != "states" or not symbols:
            raise ValueError
        return int(k), tuple(symbols)
    except ValueError:
        raise ValueError(f"bad class spec {spec!r}, expected <k>-states-<symbols>") from None


def random_dfa(rng: random.Random, alphabet: Sequence[str], max_states: int = 4) -> Dfa:
    k = rng.randint(1, max_states)
    alphabet = tuple(alphabet)
    delta = tuple(tuple(rng.randrange(k) for _ in alphabet) for _ in range(k))
    accepting = tuple(rng.random() < 0.5 for _ in range(k))
    return Dfa(alphabet, accepting, delta, rng.randrange(k))


def random_word(rng: random.Random, alphabet: Sequence[str], max_len: int) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))


# -- text and JSON formats ------------------------------------------------------

def format_dfa(m: Dfa) -> str:
    lines = [
        f"states {m.n_states}",
        f"initial {m.initial}",
        "accepting " + " ".join(str(q) for q in range(m.n_states) if m.accepting[q]),
        "alphabet " + " ".join(m.alphabet),
    ]
    for q in range(m.n_states):
        for i, a in enumerate(m.alphabet):
            lines.append(f"trans {q} {a} {m.delta[q][i]}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _split_symbols(tokens: list[str]) -> tuple[str, ...]:
    if len(tokens) == 1 and len(tokens[0]) > 1:
        return tuple(tokens[0])
    if any(len(t) != 1 for t in tokens):
        raise DfaFormatError(f"symbols must be single characters: {tokens}")
    return tuple(tokens)


def _parse_header(text: str, edge_arity: int):
    header: dict[str, list[str]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "trans":
            if len(rest) != edge_arity:
                raise DfaFormatError(f"line {lineno}: trans needs {edge_arity} fields")
            edges.append((lineno, rest))
        elif key in ("states", "initial", "accepting", "alphabet", "outputs"):
            if key in header:
                raise DfaFormatError(f"line {lineno}: duplicate {key!r}")
            header[key] = rest
        else:
            raise DfaFormatError(f"line {lineno}: unknown keyword {key!r}")
    for key in ("states", "initial", "alphabet"):
        if key not in header:
            raise DfaFormatError(f"missing {key!r} line")
    try:
        n = int(header["states"][0])
        init = int(header["initial"][0])
    except (ValueError, IndexError):
        raise DfaFormatError("states/initial need an integer") from None
    return header, edges, n, init


def parse_dfa(text: str) -> Dfa:
    header, edges, n, init = _parse_header(text, 3)
    alphabet = _split_symbols(header["alphabet"])
    try:
        acc = {int(t) for t in header.get("accepting", [])}
    except ValueError:
        raise DfaFormatError("accepting needs integer states") from None
    table: dict[tuple[int, str], int] = {}
    for lineno, (src, a, dst) in edges:
        try:
            key = (int(src), a)
            table[key] = int(dst)
        except ValueError:
            raise DfaFormatError(f"line {lineno}: bad state index") from None
    try:
        delta = tuple(tuple(table[(q, a)] for a in alphabet) for q in range(n))
    except KeyError as exc:
        raise DfaFormatError(f"missing transition for {exc.args[0]}") from None
    try:
        return Dfa(alphabet, tuple(q in acc for q in range(n)), delta, init)
    except (ValueError, IndexError) as exc:
        raise DfaFormatError(str(exc)) from None


def dfa_to_json(m: Dfa) -> dict:
    return {
        "states": m.n_states,
        "initial": m.initial,
        "accepting": [q for q in range(m.n_states) if m.accepting[q]],
        "alphabet": list(m.alphabet),
        "trans": [[q, a, m.delta[q][i]] for q in range(m.n_states) for i, a in enumerate(m.alphabet)],
    }


def dfa_from_json(obj: dict) -> Dfa:
    n = obj["states"]
    alphabet = tuple(obj["alphabet"])
    table = {(q, a): t for q, a, t in obj["trans"]}
    acc = set(obj["accepting"])
    delta = tuple(tuple(table[(q, a)] for a in alphabet) for q in range(n))
    return Dfa(alphabet, tuple(q in acc for q in range(n)), delta, obj["initial"])


# -- games ---------------------------------------------------------------------

@dataclass(frozen=True)
class MQ:
    word: str


@dataclass(frozen=True)
class EQ:
    hypothesis: Dfa


class Refusal(enum.Enum):
    NO = "no"

    def __repr__(self) -> str:
        return "no"


NO = Refusal.NO


class DfaGame(GameInstance):
    """Membership queries answered by a bit, equivalence queries by a counterexample word."""

    name = "dfa"

    def __init__(self, alphabet: Sequence[str]):
        self.alphabet = tuple(alphabet)

    def _is_word(self, w) -> bool:
        return isinstance(w, str) and all(a in self.alphabet for a in w)

    def can_terminate(self, head) -> bool:
        return isinstance(head, EQ)

    def responses(self, head, bound: int) -> list:
        if isinstance(head, MQ):
            return [False, True]
        return list(words_up_to(self.alphabet, bound))

    def is_legal(self, head, response) -> bool:
        if isinstance(head, MQ):
            return isinstance(response, bool)
        return self._is_word(response)

    def semantics(self, head, response):
        if isinstance(head, MQ):
            w, b = head.word, response
            return lambda m: accepts(m, w) == b
        h, w = head.hypothesis, response
        return lambda m: accepts(m, w) != accepts(h, w)

    def random_head(self, rng):
        if rng.random() < 0.5:
            return MQ(random_word(rng, self.alphabet, 6))
        return EQ(random_dfa(rng, self.alphabet))

    def head_to_json(self, head):
        if isinstance(head, MQ):
            return {"mq": head.word}
        return {"eq": dfa_to_json(head.hypothesis)}

    def head_from_json(self, obj):
        if "mq" in obj:
            return MQ(obj["mq"])
        return EQ(dfa_from_json(obj["eq"]))

    def response_to_json(self, response):
        if isinstance(response, bool):
            return {"bit": int(response)}
        if response is NO:
            return "no"
        return {"ce": response}

    def response_from_json(self, obj):
        if obj == "no":
            return NO
        if "bit" in obj:
            return bool(obj["bit"])
        return obj["ce"]


def dfa_semantics(head, response):
    """Standard MQ/EQ response predicates over DFAs."""
    return DfaGame(()).semantics(head, response)


@dataclass(frozen=True)
class ConceptWithBound:
    machine: Dfa
    bound: int

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("length bound must be >= 0")


def ce_size_semantics(head, response):
    if isinstance(head, MQ):
        w, b = head.word, response
        return lambda c: accepts(c.machine, w) == b
    h, w = head.hypothesis, response
    return lambda c: len(w) <= c.bound and accepts(c.machine, w) != accepts(h, w)


class CeSizeDfaGame(DfaGame):
    """Concepts carry a bound on counterexample length; longer counterexamples refute them."""

    name = "dfa-ce-size"

    def semantics(self, head, response):
        return ce_size_semantics(head, response)


def restricted_semantics(head, response):
    if isinstance(head, MQ):
        return dfa_semantics(head, response)
    h = head.hypothesis
    return lambda m: not equivalent(m, h)


class RestrictedDfaGame(DfaGame):
    """Wrong equivalence queries are answered by a bare "no"."""

    name = "dfa-restricted"

    def responses(self, head, bound: int) -> list:
        if isinstance(head, MQ):
            return [False, True]
        return [NO]

    def is_legal(self, head, response) -> bool:
        if isinstance(head, MQ):
            return isinstance(response, bool)
        return response is NO

    def semantics(self, head, response):
        return restricted_semantics(head, response)


# -- teachers ---------------------------------------------------------------------

def honest_dfa_teacher(m: Dfa) -> Teacher:
    """Answers membership truthfully and gives shortest counterexamples."""

    def step(s, head):
        if isinstance(head, MQ):
            return accepts(m, head.word), s
        ce = shortest_counterexample(m, head.hypothesis)
        return END if ce is None else (ce, s)

    return Teacher(None, step, name="honest-dfa", stateless=True)


def honest_restricted_teacher(m: Dfa) -> Teacher:
    def step(s, head):
        if isinstance(head, MQ):
            return accepts(m, head.word), s
        return END if equivalent(m, head.hypothesis) else (NO, s)

    return Teacher(None, step, name="honest-dfa-restricted", stateless=True)


def singleton_word(h: Dfa, length: int) -> str | None:
    """The word ``w`` with ``|w| == length`` if ``h`` accepts exactly {w}, else None."""
    accepted = [q for q in range(h.n_states) if h.accepting[q]]
    if not accepted:
        return None
    w = product_bfs(h.initial, h.alphabet, lambda q, i: h.delta[q][i], lambda q: h.accepting[q])
    if w is None or len(w) != length:
        return None
    return w if equivalent(h, singleton_dfa(w, h.alphabet)) else None


def restricted_adversarial_teacher(word_length: int, alphabet: Sequence[str] = ("a", "b")) -> Teacher:
    """Adversary over the singleton languages {w} with |w| == word_length.

    Keeps the set of candidate words it has not yet ruled out; every query
    rules out at most one. It ends the game only when cornered to a single
    candidate and asked exactly that one.
    """
    alphabet = tuple(alphabet)
    if len(alphabet) < 2:
        raise ValueError("restricted adversary needs an alphabet of size >= 2")
    start = frozenset("".join(t) for t in itertools.product(sorted(alphabet), repeat=word_length))

    def step(s, head):
        if isinstance(head, MQ):
            return False, (s - {head.word} if len(head.word) == word_length else s)
        w = singleton_word(head.hypothesis, word_length)
        if w is not None and s == {w}:
            return END
        return NO, (s - {w} if w is not None else s)

    return Teacher(start, step, name=f"restricted-adversary:{word_length}")


def singleton_class(word_length: int, alphabet: Sequence[str] = ("a", "b")) -> list[Dfa]:
    return [
        singleton_dfa("".join(t), alphabet)
        for t in itertools.product(sorted(alphabet), repeat=word_length)
    ]


# -- learners ------------------------------------------------------------------------

def least_equivalent_index(enumeration: Sequence[Dfa], m: Dfa) -> int | None:
    for i, h in enumerate(enumeration):
        if equivalent(m, h):
            return i
    return None


def enumerator_learner(enumeration: Sequence[Dfa], instance: DfaGame | None = None) -> Learner:
    """Ask EQ(d(0)), EQ(d(1)), ... ignoring counterexamples; step-bounded by 1 + b.

    Past the end of the list the last hypothesis is repeated.
    """
    enumeration = tuple(enumeration)
    if not enumeration:
        raise ValueError("empty enumeration")
    if instance is None:
        instance = DfaGame(enumeration[0].alphabet)

    def hyp(k: int) -> Dfa:
        return enumeration[min(k, len(enumeration) - 1)]

    def step(k: int) -> Move:
        return Move(EQ(hyp(k)), lambda w: k + 1)

    def allows(k: int):
        refuted = enumeration[:k]
        return lambda m: not any(equivalent(m, h) for h in refuted)

    def bound(m: Dfa) -> int:
        b = least_equivalent_index(enumeration, m)
        if b is None:
            raise ValueError("concept is not covered by the enumeration")
        return 1 + b

    cert = StepBoundCertificate(tick=lambda k: k, allows=allows, bound=bound)
    return Learner(instance, 0, step, name="enumerator", certificate=cert)


def consistent_learner(
    enumeration: Sequence[Dfa],
    probes: Sequence[str],
    instance: DfaGame | None = None,
) -> Learner:
    """Membership-query every probe, then conjecture the first enumerated DFA
    consistent with everything observed."""
    enumeration = tuple(enumeration)
    probes = tuple(probes)
    if instance is None:
        instance = DfaGame(enumeration[0].alphabet)

    def step(obs: tuple) -> Move:
        if len(obs) < len(probes):
            w = probes[len(obs)]
            return Move(MQ(w), lambda b: obs + ((w, b),))
        h = next(
            (m for m in enumeration if all(accepts(m, u) == b for u, b in obs)),
            enumeration[-1],
        )
        return Move(EQ(h), lambda ce: obs + ((ce, not accepts(h, ce)),))

    return Learner(instance, (), step, name="consistent")


def random_dfa_learner(
    seed: int,
    instance: DfaGame,
    max_word: int = 6,
    max_states: int = 3,
    mq_rate: float = 0.6,
) -> Learner:
    """Seeded decision-tree learner mixing random MQs and random EQs.

    Its state is the response path; every node draws its query from an RNG
    keyed on the seed and the path.
    """
    alphabet = instance.alphabet

    def token(resp) -> str:
        if isinstance(resp, bool):
            return "1" if resp else "0"
        if resp is NO:
            return "n"
        return f"[{resp}]"

    def step(path: str) -> Move:
        rng = random.Random(f"{seed}:{path}")
        if rng.random() < mq_rate:
            head = MQ(random_word(rng, alphabet, max_word))
        else:
            head = EQ(random_dfa(rng, alphabet, max_states))
        return Move(head, lambda r: path + token(r))

    return Learner(instance, "", step, name=f"random:{seed}")


def random_restricted_learner(seed: int, word_length: int, alphabet: Sequence[str] = ("a", "b")) -> Learner:
    """Random learner for the restricted game that aims its queries at length-``word_length`` words."""
    alphabet = tuple(alphabet)
    instance = RestrictedDfaGame(alphabet)

    def step(path: str) -> Move:
        rng = random.Random(f"{seed}:{path}")
        roll = rng.random()
        if roll < 0.45:
            w = "".join(rng.choice(alphabet) for _ in range(word_length))
            head = MQ(w) if rng.random() < 0.9 else MQ(random_word(rng, alphabet, word_length + 2))
        elif roll < 0.9:
            w = "".join(rng.choice(alphabet) for _ in range(word_length))
            head = EQ(singleton_dfa(w, alphabet))
        else:
            head = EQ(random_dfa(rng, alphabet, 4))
        return Move(head, lambda r: path + ("n" if r is NO else ("1" if r else "0")))

    return Learner(instance, "", step, name=f"random:{seed}")


def words_checked_bound(m: Dfa, h: Dfa) -> int:
    """Counterexample length cap used for bounded box-modality checks."""
    return 2 * (m.n_states + h.n_states)

