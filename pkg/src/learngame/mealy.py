"""Mealy machines and their learning game (output queries and equivalence queries)."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from learngame.core import END, GameInstance, Learner, Move, Teacher
from learngame.dfa import DfaFormatError, UnknownSymbol, _parse_header, _split_symbols, product_bfs, words_up_to


@dataclass(frozen=True)
class Mealy:
    """``delta[q][i] == (output, successor)`` for input symbol ``inputs[i]``."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    delta: tuple[tuple[tuple[str, int], ...], ...]
    initial: int = 0
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.delta)
        if n == 0:
            raise ValueError("a Mealy machine needs at least one state")
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for row in self.delta:
            if len(row) != len(self.inputs):
                raise ValueError("transition table does not match states x inputs")
            for o, t in row:
                if o not in self.outputs or not 0 <= t < n:
                    raise ValueError(f"bad transition ({o!r}, {t})")
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.inputs)})

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def symbol_index(self, a: str) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise UnknownSymbol(f"symbol {a!r} not in input alphabet {self.inputs}") from None


def mealy_run(m: Mealy, w: str) -> str:
    q = m.initial
    out = []
    for a in w:
        o, q = m.delta[q][m.symbol_index(a)]
        out.append(o)
    return "".join(out)


def shortest_difference(m1: Mealy, m2: Mealy) -> str | None:
    """Shortest input word (shortlex-least) whose output words differ, else None.

    The word found differs only in its last output symbol.
    """
    if set(m1.inputs) != set(m2.inputs):
        raise ValueError(f"input alphabets differ: {m1.inputs} vs {m2.inputs}")
    alphabet = m1.inputs
    remap = [m2.symbol_index(a) for a in alphabet]
    # pair states carry the last output pair so the BFS can stop right after a mismatch
    init = (m1.initial, m2.initial, None, None)

    def step(p, i):
        o1, t1 = m1.delta[p[0]][i]
        o2, t2 = m2.delta[p[1]][remap[i]]
        return t1, t2, o1, o2

    def differs(p):
        return p[2] != p[3]

    return product_bfs(init, alphabet, step, differs)


@dataclass(frozen=True)
class OQ:
    word: str


@dataclass(frozen=True)
class MealyEQ:
    hypothesis: Mealy


class MealyGame(GameInstance):
    """Output queries are answered with an output word of the same length."""

    name = "mealy"

    def __init__(self, inputs: Sequence[str], outputs: Sequence[str]):
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)

    def can_terminate(self, head) -> bool:
        return isinstance(head, MealyEQ)

    def responses(self, head, bound: int) -> list:
        if isinstance(head, OQ):
            return ["".join(t) for t in itertools.product(sorted(self.outputs), repeat=len(head.word))]
        return list(words_up_to(self.inputs, bound))

    def is_legal(self, head, response) -> bool:
        if not isinstance(response, str):
            return False
        if isinstance(head, OQ):
            return len(response) == len(head.word) and all(o in self.outputs for o in response)
        return all(a in self.inputs for a in response)

    def semantics(self, head, response):
        return mealy_semantics(head, response)

    def random_head(self, rng):
        if rng.random() < 0.5:
            n = rng.randint(0, 5)
            return OQ("".join(rng.choice(self.inputs) for _ in range(n)))
        return MealyEQ(random_mealy(rng, self.inputs, self.outputs))

    def head_to_json(self, head):
        if isinstance(head, OQ):
            return {"oq": head.word}
        return {"eq": mealy_to_json(head.hypothesis)}

    def head_from_json(self, obj):
        if "oq" in obj:
            return OQ(obj["oq"])
        return MealyEQ(mealy_from_json(obj["eq"]))

    def response_to_json(self, response):
        return response

    def response_from_json(self, obj):
        return obj


def mealy_semantics(head, response):
    if isinstance(head, OQ):
        w, v = head.word, response
        return lambda m: mealy_run(m, w) == v
    h, w = head.hypothesis, response
    return lambda m: mealy_run(m, w) != mealy_run(h, w)


def honest_mealy_teacher(m: Mealy) -> Teacher:
    def step(s, head):
        if isinstance(head, OQ):
            return mealy_run(m, head.word), s
        ce = shortest_difference(m, head.hypothesis)
        return END if ce is None else (ce, s)

    return Teacher(None, step, name="honest-mealy", stateless=True)


# -- helpers ------------------------------------------------------------------------

def random_mealy(rng: random.Random, inputs: Sequence[str], outputs: Sequence[str], max_states: int = 4) -> Mealy:
    k = rng.randint(1, max_states)
    delta = tuple(
        tuple((rng.choice(outputs), rng.randrange(k)) for _ in inputs) for _ in range(k)
    )
    return Mealy(tuple(inputs), tuple(outputs), delta, rng.randrange(k))


def enumerate_mealy(max_states: int, inputs: Sequence[str], outputs: Sequence[str]) -> list[Mealy]:
    """All Mealy machines with at most ``max_states`` states and initial state 0."""
    inputs, outputs = tuple(inputs), tuple(outputs)
    cells = len(inputs)
    out = []
    for k in range(1, max_states + 1):
        choices = list(itertools.product(outputs, range(k)))
        for flat in itertools.product(choices, repeat=k * cells):
            delta = tuple(tuple(flat[q * cells:(q + 1) * cells]) for q in range(k))
            out.append(Mealy(inputs, outputs, delta))
    return out


def mealy_enumerator_learner(enumeration: Sequence[Mealy]) -> Learner:
    enumeration = tuple(enumeration)
    first = enumeration[0]
    instance = MealyGame(first.inputs, first.outputs)

    def step(k: int) -> Move:
        return Move(MealyEQ(enumeration[min(k, len(enumeration) - 1)]), lambda w: k + 1)

    return Learner(instance, 0, step, name="enumerator")


def random_mealy_learner(seed: int, instance: MealyGame, oq_rate: float = 0.6) -> Learner:
    def step(path: str) -> Move:
        rng = random.Random(f"{seed}:{path}")
        if rng.random() < oq_rate:
            n = rng.randint(0, 6)
            head = OQ("".join(rng.choice(instance.inputs) for _ in range(n)))
        else:
            head = MealyEQ(random_mealy(rng, instance.inputs, instance.outputs, 3))
        return Move(head, lambda r: path + f"[{r}]")

    return Learner(instance, "", step, name=f"random:{seed}")


def format_mealy(m: Mealy) -> str:
    lines = [
        f"states {m.n_states}",
        f"initial {m.initial}",
        "alphabet " + " ".join(m.inputs),
        "outputs " + " ".join(m.outputs),
    ]
    for q in range(m.n_states):
        for i, a in enumerate(m.inputs):
            o, t = m.delta[q][i]
            lines.append(f"trans {q} {a} {o} {t}")
    return "\n".join(lines) + "\n"


def parse_mealy(text: str) -> Mealy:
    header, edges, n, init = _parse_header(text, 4)
    if "outputs" not in header:
        raise DfaFormatError("missing 'outputs' line")
    inputs = _split_symbols(header["alphabet"])
    outputs = _split_symbols(header["outputs"])
    table = {}
    for lineno, (src, a, o, dst) in edges:
        try:
            table[(int(src), a)] = (o, int(dst))
        except ValueError:
            raise DfaFormatError(f"line {lineno}: bad state index") from None
    try:
        delta = tuple(tuple(table[(q, a)] for a in inputs) for q in range(n))
        return Mealy(inputs, outputs, delta, init)
    except KeyError as exc:
        raise DfaFormatError(f"missing transition for {exc.args[0]}") from None
    except ValueError as exc:
        raise DfaFormatError(str(exc)) from None


def mealy_to_json(m: Mealy) -> dict:
    return {
        "states": m.n_states,
        "initial": m.initial,
        "alphabet": list(m.inputs),
        "outputs": list(m.outputs),
        "trans": [
            [q, a, m.delta[q][i][0], m.delta[q][i][1]]
            for q in range(m.n_states)
            for i, a in enumerate(m.inputs)
        ],
    }


def mealy_from_json(obj: dict) -> Mealy:
    inputs = tuple(obj["alphabet"])
    table = {(q, a): (o, t) for q, a, o, t in obj["trans"]}
    delta = tuple(tuple(table[(q, a)] for a in inputs) for q in range(obj["states"]))
    return Mealy(inputs, tuple(obj["outputs"]), delta, obj["initial"])
