import random

import pytest
from hypothesis import given, settings, strategies as st

from learngame.core import (
    END,
    Ended,
    IllegalResponse,
    Move,
    StepBoundCertificate,
    Teacher,
    Transition,
    check_learner_correct,
    enumerate_states,
    finds_within,
    game_step,
    holds_forall,
    run,
    semantics_retraction_check,
    still_possible,
    still_possible_among,
    verify_certificate,
)
from learngame.nat import (
    NAT,
    TOO_HIGH,
    TOO_LOW,
    Closed,
    Guess,
    HalfOpen,
    adversarial_teacher,
    bisect_learner,
    certified_log_learner,
    constant_too_low_teacher,
    honest_teacher,
    linear_learner,
    random_learner,
)


def test_game_step_examples():
    out = game_step(bisect_learner(), honest_teacher(2), HalfOpen(0), None)
    assert out == Transition(Guess(1), TOO_LOW, HalfOpen(2), None)
    assert game_step(linear_learner(), honest_teacher(0), 0, None) == Ended(None)
    out = game_step(linear_learner(), constant_too_low_teacher(), 0, None)
    assert out == Transition(Guess(0), TOO_LOW, 1, None)


def test_run_examples():
    t = run(bisect_learner(), honest_teacher(2), 20)
    assert [(r.head.value, r.response) for r in t.rounds] == [(1, TOO_LOW), (5, TOO_HIGH), (3, TOO_HIGH), (2, END)]
    assert t.ended and len(t) == 4
    assert [r.index for r in t.rounds] == [0, 1, 2, 3]

    t = run(linear_learner(), constant_too_low_teacher(), 3)
    assert [(r.head.value, r.response) for r in t.rounds] == [(0, TOO_LOW), (1, TOO_LOW), (2, TOO_LOW)]
    assert not t.ended

    t = run(linear_learner(), honest_teacher(2), 20)
    assert [r.response for r in t.rounds] == [TOO_LOW, TOO_LOW, END]


def test_run_zero_rounds_and_negative():
    assert len(run(linear_learner(), honest_teacher(0), 0)) == 0
    with pytest.raises(ValueError):
        run(linear_learner(), honest_teacher(0), -1)


def test_illegal_response_reports_round():
    calls = []

    def step(s, head):
        calls.append(head)
        return (TOO_LOW, s) if len(calls) < 3 else ("sideways", s)

    with pytest.raises(IllegalResponse) as exc:
        run(linear_learner(), Teacher(None, step), 10)
    assert exc.value.round_index == 2


def test_end_on_non_terminating_query_is_illegal():
    from learngame.dfa import MQ, DfaGame
    from learngame.core import Learner

    learner = Learner(DfaGame("a"), 0, lambda q: Move(MQ("a"), lambda b: q))
    with pytest.raises(IllegalResponse):
        game_step(learner, Teacher(None, lambda s, h: END), 0, None)


def test_still_possible_examples():
    assert still_possible(bisect_learner(), honest_teacher(2), 123, 0)
    assert still_possible(linear_learner(), constant_too_low_teacher(), 10, 3)
    assert not still_possible(bisect_learner(), honest_teacher(2), 2, 4)


def test_finds_within_examples():
    for d in (0, 1, 5):
        assert finds_within(linear_learner(), honest_teacher(d), d, 1 + d)
        assert not finds_within(linear_learner(), honest_teacher(d), d, d)
    assert not finds_within(linear_learner(), constant_too_low_teacher(), 10, 3)
    assert finds_within(bisect_learner(), honest_teacher(2), 2, 4)


def test_still_possible_among_agrees_with_pointwise():
    learner, teacher = bisect_learner(), adversarial_teacher(0, 50)
    for n in range(8):
        fast = still_possible_among(learner, teacher, range(60), n)
        slow = [d for d in range(60) if still_possible(learner, teacher, d, n)]
        assert fast == slow


@settings(max_examples=200)
@given(
    st.sampled_from(["linear", "bisect", "log", "random"]),
    st.sampled_from(["honest", "const", "adv"]),
    st.integers(min_value=0, max_value=300),
    st.integers(min_value=0, max_value=300),
    st.integers(min_value=0, max_value=20),
)
def test_still_possible_antitone(lname, tname, d, secret, n):
    learner = {
        "linear": linear_learner, "bisect": bisect_learner,
        "log": certified_log_learner, "random": lambda: random_learner(secret),
    }[lname]()
    teacher = {
        "honest": lambda: honest_teacher(secret),
        "const": constant_too_low_teacher,
        "adv": lambda: adversarial_teacher(0, secret),
    }[tname]()
    if still_possible(learner, teacher, d, n + 1):
        assert still_possible(learner, teacher, d, n)


def test_run_is_deterministic():
    for learner, teacher in [
        (bisect_learner(), adversarial_teacher(3, 900)),
        (random_learner(7), honest_teacher(42)),
    ]:
        assert run(learner, teacher, 50).rounds == run(learner, teacher, 50).rounds


def test_retraction_nat_and_negative_control():
    move = bisect_learner().step(Closed(2, 9))
    assert semantics_retraction_check(NAT, move)

    def swapped(m):
        return Move(m.head, lambda r: (None, m.next(TOO_LOW if r is TOO_HIGH else TOO_HIGH)), m.result)

    assert not semantics_retraction_check(NAT, move, enrich=swapped)


def test_retraction_dfa_mq():
    from learngame.dfa import MQ, DfaGame

    move = Move(MQ("ab"), lambda b: ("next", b))
    assert semantics_retraction_check(DfaGame("ab"), move)


def test_holds_forall():
    m = linear_learner().step(5)
    assert holds_forall(NAT, m, lambda branch: True, 0)
    assert not holds_forall(NAT, m, lambda branch: False, 0)

    # guessing 0: the too-high branch says d < 0, so any demand on it is vacuous
    zero = Move(Guess(0), lambda w: "anything")
    assert holds_forall(NAT, zero, lambda kq: not any(kq[0](d) for d in range(100)) or kq[1] == "anything", 0)
    too_high_pred = NAT.semantics(Guess(0), TOO_HIGH)
    assert not any(too_high_pred(d) for d in range(1000))


def test_holds_forall_item5_on_log_learner():
    learner = certified_log_learner()
    cert = learner.certificate
    for q in enumerate_states(learner, 8, 0):
        for d in range(300):
            if not cert.allows(q)(d):
                continue

            def item5(kq, q=q, d=d):
                k, succ = kq
                return not k(d) or (cert.allows(succ)(d) and cert.tick(q) < cert.tick(succ))

            assert holds_forall(NAT, learner.step(q), item5, 0)


def test_verify_certificate_linear():
    learner = linear_learner()
    report = verify_certificate(learner, learner.certificate, list(range(65)), 70, 0)
    assert report.ok, [str(v) for v in report.violations]


def test_verify_certificate_fake_bound_flags_item4():
    learner = linear_learner()
    fake = StepBoundCertificate(tick=lambda n: n, allows=lambda n: (lambda d: d >= n), bound=lambda d: 1)
    report = verify_certificate(learner, fake, list(range(10)), 10, 0)
    kinds = {(v.kind, v.state, v.concept) for v in report.violations}
    assert ("tick-below-bound", 2, 5) in kinds
    assert all(v.kind == "tick-below-bound" for v in report.violations)


def test_verify_certificate_flags_broken_preservation():
    learner = linear_learner()
    # from state 1 on, odd concepts are dropped although no answer refuted them
    bad = StepBoundCertificate(
        tick=lambda n: n,
        allows=lambda n: (lambda d: d >= n and (n == 0 or d % 2 == 0)),
        bound=lambda d: 1 + d,
    )
    report = verify_certificate(learner, bad, list(range(20)), 20, 0)
    found = {(v.kind, v.state, v.concept, v.response) for v in report.violations}
    assert ("preserves-allows", 0, 3, TOO_LOW) in found


def test_verify_certificate_flags_initial_allows():
    learner = linear_learner()
    bad = StepBoundCertificate(tick=lambda n: n, allows=lambda n: (lambda d: n < d), bound=lambda d: 1 + d)
    report = verify_certificate(learner, bad, list(range(5)), 5, 0)
    assert [v.concept for v in report.violations if v.kind == "initial-allows"] == [0]


def test_verify_certificate_log_learner():
    learner = certified_log_learner()
    report = verify_certificate(learner, learner.certificate, list(range(1025)), 30, 0)
    assert report.ok
    assert report.depth == 30 and report.enum_bound == 0


def test_check_learner_correct():
    log = certified_log_learner()
    teachers = [honest_teacher, constant_too_low_teacher(), adversarial_teacher(0, 1023)]
    assert check_learner_correct(log, log.certificate, teachers, range(513)).ok

    lin = linear_learner()
    assert check_learner_correct(lin, lin.certificate, teachers, range(65)).ok

    report = check_learner_correct(bisect_learner(), lambda d: 1, [honest_teacher], range(5))
    failed = {v.concept for v in report.violations}
    assert 2 in failed
    v2 = next(v for v in report.violations if v.concept == 2)
    assert v2.bound == 1 and v2.rounds == 1


def test_certificate_soundness_on_random_bounded_learners():
    # certificate verified on the full reachable space => bound holds for sampled teachers
    rng = random.Random(5)
    log = certified_log_learner()
    sample = list(range(200))
    assert verify_certificate(log, log.certificate, sample, 40, 0).ok
    teachers = [honest_teacher, constant_too_low_teacher()] + [
        adversarial_teacher(lo, lo + rng.randrange(400)) for lo in (0, 3, 17, 100)
    ]
    assert check_learner_correct(log, log.certificate, teachers, sample).ok
