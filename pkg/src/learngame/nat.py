"""Natural number guessing: the teacher holds a number, the learner guesses."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Callable, Union

from learngame.core import (
    END,
    GameInstance,
    Learner,
    Move,
    StepBoundCertificate,
    Teacher,
    run,
    still_possible,
    still_possible_among,
)
from learngame.numutil import floor_log2, pow2


class Wrong(enum.Enum):
    TOO_HIGH = "too-high"
    TOO_LOW = "too-low"

    def __repr__(self) -> str:
        return self.value


TOO_HIGH = Wrong.TOO_HIGH
TOO_LOW = Wrong.TOO_LOW


@dataclass(frozen=True)
class Guess:
    value: int


class PreconditionViolated(ValueError):
    pass


def nat_semantics(head: Guess, w: Wrong):
    h = head.value
    if w is TOO_LOW:
        return lambda d: h < d
    return lambda d: h > d


class NatGame(GameInstance):
    name = "nat"

    def can_terminate(self, head) -> bool:
        return True

    def responses(self, head, bound: int = 0) -> list:
        return [TOO_HIGH, TOO_LOW]

    def is_legal(self, head, response) -> bool:
        return isinstance(response, Wrong)

    def semantics(self, head, response):
        return nat_semantics(head, response)

    def random_head(self, rng):
        return Guess(rng.randrange(0, 1 << rng.randrange(1, 64)))

    def head_to_json(self, head):
        return {"guess": head.value}

    def head_from_json(self, obj):
        return Guess(int(obj["guess"]))

    def response_to_json(self, response):
        return response.value

    def response_from_json(self, obj):
        return Wrong(obj)


NAT = NatGame()


# -- teachers -----------------------------------------------------------------

def honest_teacher(secret: int) -> Teacher:
    def step(s, head):
        if head.value == secret:
            return END
        return (TOO_LOW if head.value < secret else TOO_HIGH), s

    return Teacher(None, step, name=f"honest:{secret}", stateless=True)


def constant_too_low_teacher() -> Teacher:
    return Teacher(None, lambda s, head: (TOO_LOW, s), name="const-too-low", stateless=True)


def stateless_teacher(answer: Callable[[int], Union[Wrong, object]], name: str = "stateless") -> Teacher:
    """Stateless teacher from a plain function of the guess (``END`` or a :class:`Wrong`)."""

    def step(s, head):
        a = answer(head.value)
        return END if a is END else (a, s)

    return Teacher(None, step, name=name, stateless=True)


def adversarial_step(interval: tuple[int, int], k: int):
    n, m = interval
    if n == k == m:
        return END
    mid = (n + m) // 2
    if k <= mid:
        return TOO_LOW, (max(k + 1, n), m)
    return TOO_HIGH, (n, min(k - 1, m))


def adversarial_teacher(lo: int, hi: int) -> Teacher:
    """Teacher that keeps an interval of candidates and halves it on every guess."""
    if lo > hi:
        raise ValueError(f"adversarial teacher needs lo <= hi, got [{lo}, {hi}]")
    return Teacher((lo, hi), lambda s, head: adversarial_step(s, head.value), name=f"adversarial:{lo}:{hi}")


# -- learners -----------------------------------------------------------------

def linear_learner() -> Learner:
    def step(n: int) -> Move:
        return Move(Guess(n), lambda w: n + 1)

    cert = StepBoundCertificate(
        tick=lambda n: n,
        allows=lambda n: (lambda d: d >= n),
        bound=lambda d: 1 + d,
    )
    return Learner(NAT, 0, step, name="linear", certificate=cert)


@dataclass(frozen=True)
class HalfOpen:
    lo: int

    def __contains__(self, d: int) -> bool:
        return self.lo <= d


@dataclass(frozen=True)
class Closed:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, d: int) -> bool:
        return self.lo <= d <= self.hi


IntervalState = Union[HalfOpen, Closed]


def bisect_step(q: IntervalState) -> Move:
    if isinstance(q, HalfOpen):
        n = q.lo
        nxt = {TOO_LOW: HalfOpen(2 * n + 2), TOO_HIGH: Closed(n, 2 * n)}
        return Move(Guess(2 * n + 1), nxt.__getitem__)
    n, m = q.lo, q.hi
    mid = (n + m) // 2
    nxt = {TOO_LOW: Closed(min(m, mid + 1), m), TOO_HIGH: Closed(n, max(n, mid - 1))}
    return Move(Guess(mid), nxt.__getitem__)


def bisect_learner(start: IntervalState = HalfOpen(0)) -> Learner:
    """Gallop to the next power of two, then bisect the closed interval.

    Starting from a ``Closed`` interval skips the galloping phase.
    """
    name = "bisect" if start == HalfOpen(0) else f"bisect:{start.lo}:{start.hi}"
    return Learner(NAT, start, bisect_step, name=name)


@dataclass(frozen=True)
class Init:
    """[0, inf)"""


@dataclass(frozen=True)
class Doubling:
    """[2**b, inf)"""

    b: int

    def __contains__(self, d: int) -> bool:
        return d >= pow2(self.b)


@dataclass(frozen=True)
class Narrow:
    """[base, base + 2**e), with e <= floor_log2(base)."""

    base: int
    e: int

    def __post_init__(self):
        if self.e > floor_log2(self.base):
            raise ValueError(f"Narrow({self.base}, {self.e}) violates e <= log2(base)")

    def __contains__(self, d: int) -> bool:
        return self.base <= d < self.base + pow2(self.e)


CertifiedState = Union[Init, Doubling, Narrow]


def _log_step(q: CertifiedState) -> Move:
    if isinstance(q, Init):
        nxt = {TOO_LOW: Doubling(1), TOO_HIGH: Narrow(0, 0)}
        return Move(Guess(1), nxt.__getitem__)
    if isinstance(q, Doubling):
        top = pow2(q.b + 1)
        nxt = {TOO_LOW: Doubling(q.b + 1), TOO_HIGH: Narrow(pow2(q.b), q.b)}
        return Move(Guess(top), nxt.__getitem__)
    if q.e == 0:
        # any wrong answer contradicts the single candidate
        return Move(Guess(q.base), lambda w: q)
    mid = q.base + pow2(q.e - 1)
    nxt = {TOO_LOW: Narrow(mid, q.e - 1), TOO_HIGH: Narrow(q.base, q.e - 1)}
    return Move(Guess(mid), nxt.__getitem__)


def log_tick(q: CertifiedState) -> int:
    if isinstance(q, Init):
        return 0
    if isinstance(q, Doubling):
        return 1 + q.b
    return 2 + 2 * floor_log2(q.base) - q.e


def log_allows(q: CertifiedState):
    if isinstance(q, Init):
        return lambda d: True
    return q.__contains__


def log_bound(d: int) -> int:
    return 3 + 2 * floor_log2(d)


def certified_log_learner() -> Learner:
    """Binary search over power-of-two blocks, step-bounded by 3 + 2*floor_log2(d)."""
    cert = StepBoundCertificate(tick=log_tick, allows=log_allows, bound=log_bound)
    return Learner(NAT, Init(), _log_step, name="log", certificate=cert)


def two_round_learner(teacher: Teacher, n0: int) -> Learner:
    """A learner tailored to one stateless teacher, finding every secret in 2 rounds.

    Scans ``0..n0`` for the least guess ``m`` the teacher does not call too low.
    Guessing ``m`` either ends the game or leaves only ``d < m``; guessing
    ``m - 1`` afterwards draws a too-low, which rules out everything else.
    """
    if not teacher.stateless:
        raise PreconditionViolated("two_round_learner needs a stateless teacher")
    m = next((g for g in range(n0 + 1) if teacher.answer(Guess(g)) is not TOO_LOW), None)
    if m is None:
        raise PreconditionViolated(f"teacher answers too-low to every guess in 0..{n0}")
    if m == 0 or teacher.answer(Guess(m)) is END:
        guesses = [m]
    else:
        guesses = [m, m - 1]

    def step(stage: int) -> Move:
        g = guesses[min(stage, len(guesses) - 1)]
        return Move(Guess(g), lambda w: stage + 1)

    return Learner(NAT, 0, step, name=f"two-round:{m}")


def random_learner(seed: int, lo: int = 0, hi: int = 100, depth: int = 32) -> Learner:
    """Seeded decision-tree learner guessing inside the interval it still believes in.

    Its state is ``(lo, hi, path)``; the guess at a node is drawn from
    ``[lo, hi]`` by an RNG keyed on the seed and the response path. Past
    ``depth`` rounds it falls back to scanning upward from ``lo``.
    """

    def step(q) -> Move:
        a, b, path = q
        if len(path) >= depth or a > b:
            g = a
        else:
            rng = random.Random(f"{seed}:{path}")
            g = rng.randint(a, b)

        def nxt(w):
            if w is TOO_LOW:
                a2, b2 = max(a, g + 1), b
            else:
                a2, b2 = a, min(b, g - 1)
            if a2 > b2:
                a2, b2 = g + 1, g + 1
            return a2, b2, path + ("l" if w is TOO_LOW else "h")

        return Move(Guess(g), nxt)

    return Learner(NAT, (lo, hi, ""), step, name=f"random:{seed}")


# -- lower bound and oracles ----------------------------------------------------

def lower_bound_witness(learner: Learner, lo: int, m: int) -> int | None:
    """Some ``d`` in ``[lo, lo + m]`` still possible after floor_log2(m) rounds against the adversary."""
    teacher = adversarial_teacher(lo, lo + m)
    rounds = floor_log2(m)
    alive = still_possible_among(learner, teacher, range(lo, lo + m + 1), rounds)
    return alive[0] if alive else None


def adversary_interval_after(learner: Learner, lo: int, m: int, rounds: int) -> tuple[int, int] | None:
    """The adversary's interval after ``rounds`` rounds, or None if the game ended."""
    teacher = adversarial_teacher(lo, lo + m)
    q, s = learner.initial, teacher.initial
    for _ in range(rounds):
        out = teacher.step(s, learner.step(q).head)
        if out is END:
            return None
        w, s = out
        q = learner.step(q).next(w)
    return s


def witness_by_scan(learner: Learner, lo: int, m: int) -> int | None:
    """Per-candidate variant of :func:`lower_bound_witness`, via :func:`still_possible`."""
    teacher = adversarial_teacher(lo, lo + m)
    rounds = floor_log2(m)
    for d in range(lo, lo + m + 1):
        if still_possible(learner, teacher, d, rounds):
            return d
    return None


def minimax_optimal_rounds(s: int) -> int:
    """Worst-case guesses to force END on ``s`` consecutive candidates, by game-tree minimax.

    A guess at position ``i`` leaves ``i`` candidates below and ``s - 1 - i``
    above; empty sides cost nothing.
    """
    if s < 1:
        raise ValueError("candidate count must be >= 1")
    value = [0] * (s + 1)
    for size in range(1, s + 1):
        value[size] = 1 + min(max(value[i], value[size - 1 - i]) for i in range(size))
    return value[s]


def rounds_to_end(learner: Learner, teacher: Teacher, max_rounds: int) -> int | None:
    trace = run(learner, teacher, max_rounds)
    return len(trace) if trace.ended else None
