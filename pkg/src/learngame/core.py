"""Game engine: learners, teachers, rounds, and the judgement of a game.

A learner is a pointed state machine ``step: C -> Move``; a move carries the
query head it emits, the result payload handed out if the teacher ends the game,
and a continuation from responses to successor states. A teacher is given in
its concrete per-game form ``step: (T, head) -> END | (response, T)``.

Which concepts survive a response is decided by a :class:`GameInstance`, which
maps every (head, response) pair to a predicate on the concept domain.
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

log = logging.getLogger(__name__)

Predicate = Callable[[Any], bool]


class _End:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "END"

    def __reduce__(self):
        return (_End, ())


END = _End()
"""Teacher answer that ends the game (the learner's guess was accepted)."""


class IllegalResponse(Exception):
    """A teacher answered outside the response set of the query head."""

    def __init__(self, head, response, round_index: int | None = None):
        self.head = head
        self.response = response
        self.round_index = round_index
        where = "" if round_index is None else f" in round {round_index}"
        super().__init__(f"illegal response {response!r} to {head!r}{where}")


@dataclass(frozen=True)
class Move:
    """What a learner does in one state: a query head and its continuation."""

    head: Any
    next: Callable[[Any], Any]
    result: Any = None


class GameInstance:
    """Query heads, responses and response semantics of one game type.

    Subclasses fill in the abstract methods; the JSON hooks define the wire
    shapes used by trace files.
    """

    name = "game"

    def can_terminate(self, head) -> bool:
        raise NotImplementedError

    def responses(self, head, bound: int) -> list:
        """All non-terminating responses to ``head``.

        Infinite response sets are cut off at size ``bound``; finite ones ignore it.
        """
        raise NotImplementedError

    def is_legal(self, head, response) -> bool:
        raise NotImplementedError

    def semantics(self, head, response) -> Predicate:
        raise NotImplementedError

    def enrich(self, move: Move) -> Move:
        """Pair every successor of ``move`` with the predicate its response carries."""
        head, cont, sem = move.head, move.next, self.semantics
        return Move(head, lambda resp: (sem(head, resp), cont(resp)), move.result)

    def random_head(self, rng):
        raise NotImplementedError

    def head_to_json(self, head):
        raise NotImplementedError

    def head_from_json(self, obj):
        raise NotImplementedError

    def response_to_json(self, response):
        raise NotImplementedError

    def response_from_json(self, obj):
        raise NotImplementedError

    def result_to_json(self, result):
        return result

    def result_from_json(self, obj):
        return obj


def _identity(x):
    return x


@dataclass(frozen=True)
class StepBoundCertificate:
    """Evidence that a learner is step-bounded by ``bound``.

    ``tick(q)`` counts the queries performed on the way to ``q``, ``allows(q)``
    is the predicate of concepts not yet refuted at ``q``.
    """

    tick: Callable[[Any], int]
    allows: Callable[[Any], Predicate]
    bound: Callable[[Any], int]


@dataclass(frozen=True)
class Learner:
    instance: GameInstance
    initial: Any
    step: Callable[[Any], Move]
    name: str = "learner"
    key: Callable[[Any], Hashable] = _identity
    certificate: StepBoundCertificate | None = None


@dataclass(frozen=True)
class Teacher:
    initial: Any
    step: Callable[[Any, Any], Any]
    name: str = "teacher"
    stateless: bool = False

    def answer(self, head):
        """Answer of a stateless teacher, ignoring the state it hands back."""
        out = self.step(self.initial, head)
        return out if out is END else out[0]


@dataclass(frozen=True)
class Ended:
    result: Any


@dataclass(frozen=True)
class Transition:
    head: Any
    response: Any
    learner_state: Any
    teacher_state: Any


def game_step(learner: Learner, teacher: Teacher, q, s) -> Ended | Transition:
    move = learner.step(q)
    out = teacher.step(s, move.head)
    instance = learner.instance
    if out is END:
        if not instance.can_terminate(move.head):
            raise IllegalResponse(move.head, END)
        return Ended(move.result)
    response, s_next = out
    if not instance.is_legal(move.head, response):
        raise IllegalResponse(move.head, response)
    return Transition(move.head, response, move.next(response), s_next)


class Outcome(enum.Enum):
    ENDED = "ended"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class Round:
    index: int
    head: Any
    response: Any


@dataclass
class Trace:
    rounds: list[Round] = field(default_factory=list)
    outcome: Outcome = Outcome.TRUNCATED
    result: Any = None

    def __len__(self) -> int:
        return len(self.rounds)

    @property
    def ended(self) -> bool:
        return self.outcome is Outcome.ENDED

    def pairs(self) -> list[tuple[Any, Any]]:
        return [(r.head, r.response) for r in self.rounds]


def run(learner: Learner, teacher: Teacher, max_rounds: int) -> Trace:
    """Play from the initial states for at most ``max_rounds`` rounds.

    A round answered with END is recorded with ``END`` as its response.
    """
    if max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    trace = Trace()
    q, s = learner.initial, teacher.initial
    for k in range(max_rounds):
        try:
            out = game_step(learner, teacher, q, s)
        except IllegalResponse as exc:
            raise IllegalResponse(exc.head, exc.response, k) from None
        if isinstance(out, Ended):
            trace.rounds.append(Round(k, learner.step(q).head, END))
            trace.outcome = Outcome.ENDED
            trace.result = out.result
            return trace
        trace.rounds.append(Round(k, out.head, out.response))
        q, s = out.learner_state, out.teacher_state
    return trace


def still_possible(learner: Learner, teacher: Teacher, d, n: int, q=None, s=None) -> bool:
    """Whether ``d`` survives ``n`` rounds played from ``(q, s)``.

    ``q`` and ``s`` default to the initial states. Surviving means the game has
    not ended and ``d`` satisfies every response predicate seen so far.
    """
    q = learner.initial if q is None else q
    s = teacher.initial if s is None else s
    sem = learner.instance.semantics
    for _ in range(n):
        out = game_step(learner, teacher, q, s)
        if isinstance(out, Ended):
            return False
        if not sem(out.head, out.response)(d):
            return False
        q, s = out.learner_state, out.teacher_state
    return True


def still_possible_among(learner: Learner, teacher: Teacher, candidates: Iterable, n: int) -> list:
    """The members of ``candidates`` still possible after ``n`` rounds.

    Plays the game once and filters, which agrees with calling
    :func:`still_possible` per candidate because the play does not depend on it.
    """
    alive = list(candidates)
    q, s = learner.initial, teacher.initial
    sem = learner.instance.semantics
    for _ in range(n):
        if not alive:
            break
        out = game_step(learner, teacher, q, s)
        if isinstance(out, Ended):
            return []
        pred = sem(out.head, out.response)
        alive = [d for d in alive if pred(d)]
        q, s = out.learner_state, out.teacher_state
    return alive


def finds_within(learner: Learner, teacher: Teacher, d, n: int) -> bool:
    return not still_possible(learner, teacher, d, n)


def semantics_retraction_check(
    instance: GameInstance,
    move: Move,
    enum_bound: int = 4,
    enrich: Callable[[Move], Move] | None = None,
) -> bool:
    """Check that forgetting the predicates of the enriched move gives back ``move``."""
    enriched = (enrich or instance.enrich)(move)
    if enriched.head != move.head or enriched.result != move.result:
        return False
    for resp in instance.responses(move.head, enum_bound):
        _pred, succ = enriched.next(resp)
        if succ != move.next(resp):
            return False
    return True


def failing_branches(instance: GameInstance, move: Move, pred_on_branches, enum_bound: int) -> list:
    enriched = instance.enrich(move)
    return [
        resp
        for resp in instance.responses(move.head, enum_bound)
        if not pred_on_branches(enriched.next(resp))
    ]


def holds_forall(instance: GameInstance, move: Move, pred_on_branches, enum_bound: int) -> bool:
    """Box modality: every (predicate, successor) branch of ``move`` satisfies the predicate.

    Exact for finite response sets, bounded by ``enum_bound`` otherwise.
    """
    return not failing_branches(instance, move, pred_on_branches, enum_bound)


@dataclass(frozen=True)
class Violation:
    kind: str
    concept: Any
    state: Any = None
    response: Any = None
    teacher: str | None = None
    rounds: int | None = None
    bound: int | None = None

    def __str__(self) -> str:
        parts = [self.kind, f"d={self.concept!r}"]
        if self.teacher is not None:
            parts.append(f"teacher={self.teacher}")
        if self.state is not None:
            parts.append(f"state={self.state!r}")
        if self.response is not None:
            parts.append(f"response={self.response!r}")
        if self.rounds is not None:
            parts.append(f"rounds={self.rounds}")
        if self.bound is not None:
            parts.append(f"bound={self.bound}")
        return " ".join(parts)


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0
    states_explored: int = 0
    depth: int | None = None
    enum_bound: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        bits = [f"checked={self.checked}", f"violations={len(self.violations)}"]
        if self.depth is not None:
            bits.append(f"states={self.states_explored} depth={self.depth}")
        if self.enum_bound is not None:
            bits.append(f"enum_bound={self.enum_bound}")
        return " ".join(bits)


def verify_certificate(
    learner: Learner,
    cert: StepBoundCertificate,
    d_sample: Sequence,
    depth: int,
    enum_bound: int,
) -> Report:
    """Check the step-bound conditions on every state reachable within ``depth`` steps.

    Checked per reachable state ``q`` and sampled concept ``d``: every sampled
    concept is allowed initially; ``d in allows(q)`` implies
    ``tick(q) < bound(d)``; and every response consistent with an allowed ``d``
    leads to a state that still allows it with a larger tick.

    States that allow no sampled concept are not expanded: none of the checks
    can fire below them.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if not d_sample:
        raise ValueError("d_sample must be nonempty")
    instance = learner.instance
    report = Report(depth=depth, enum_bound=enum_bound)
    bounds = [cert.bound(d) for d in d_sample]

    q0 = learner.initial
    allowed0 = cert.allows(q0)
    for d in d_sample:
        if not allowed0(d):
            report.violations.append(Violation("initial-allows", d, state=q0))

    seen = {learner.key(q0)}
    frontier = deque([(q0, 0)])
    while frontier:
        q, level = frontier.popleft()
        report.states_explored += 1
        allowed = cert.allows(q)
        tick_q = cert.tick(q)
        live = [(d, b) for d, b in zip(d_sample, bounds) if allowed(d)]
        if not live:
            continue
        move = learner.step(q)
        successors = {}
        for resp in instance.responses(move.head, enum_bound):
            succ = move.next(resp)
            successors[resp] = (instance.semantics(move.head, resp), succ, cert.allows(succ), cert.tick(succ))
        for d, b in live:
            report.checked += 1
            if not tick_q < b:
                report.violations.append(Violation("tick-below-bound", d, state=q, bound=b))
            for resp, (pred, succ, allowed_succ, tick_succ) in successors.items():
                if pred(d) and not (allowed_succ(d) and tick_q < tick_succ):
                    report.violations.append(Violation("preserves-allows", d, state=q, response=resp))
        if level < depth:
            for _, succ, _, _ in successors.values():
                k = learner.key(succ)
                if k not in seen:
                    seen.add(k)
                    frontier.append((succ, level + 1))
    log.debug("verify_certificate: %s", report.summary())
    return report


def check_learner_correct(
    learner: Learner,
    bound: Callable[[Any], int] | StepBoundCertificate,
    teachers: Sequence[Teacher | Callable[[Any], Teacher]],
    d_sample: Iterable,
) -> Report:
    """Check that ``learner`` finds every sampled ``d`` within ``bound(d)`` rounds.

    A teacher entry may be a callable ``d -> Teacher`` for families such as
    honest teachers indexed by their secret.
    """
    if isinstance(bound, StepBoundCertificate):
        bound = bound.bound
    report = Report()
    d_sample = list(d_sample)
    for entry in teachers:
        for d in d_sample:
            teacher = entry if isinstance(entry, Teacher) else entry(d)
            b = bound(d)
            report.checked += 1
            if not finds_within(learner, teacher, d, b):
                rounds = len(run(learner, teacher, b))
                report.violations.append(
                    Violation("not-found-within-bound", d, teacher=teacher.name, rounds=rounds, bound=b)
                )
    return report


def enumerate_states(learner: Learner, depth: int, enum_bound: int) -> list:
    """Learner states reachable within ``depth`` transitions over enumerated responses."""
    instance = learner.instance
    seen = {learner.key(learner.initial)}
    out = [learner.initial]
    frontier = deque([(learner.initial, 0)])
    while frontier:
        q, level = frontier.popleft()
        if level >= depth:
            continue
        move = learner.step(q)
        for resp in instance.responses(move.head, enum_bound):
            succ = move.next(resp)
            k = learner.key(succ)
            if k not in seen:
                seen.add(k)
                out.append(succ)
                frontier.append((succ, level + 1))
    return out
