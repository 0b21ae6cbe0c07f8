import random

import pytest
from hypothesis import given, settings, strategies as st

from learngame.core import END, run
from learngame.dfa import UnknownSymbol, words_up_to
from learngame.mealy import (
    Mealy,
    MealyEQ,
    MealyGame,
    OQ,
    enumerate_mealy,
    format_mealy,
    honest_mealy_teacher,
    mealy_enumerator_learner,
    mealy_from_json,
    mealy_run,
    mealy_semantics,
    mealy_to_json,
    parse_mealy,
    random_mealy,
    random_mealy_learner,
    shortest_difference,
)

IDENTITY = Mealy(("a", "b"), ("a", "b"), ((("a", 0), ("b", 0)),))
PARITY = Mealy(("a",), ("0", "1"), ((("1", 1),), (("0", 0),)))


def test_run_examples():
    assert mealy_run(IDENTITY, "") == ""
    assert mealy_run(IDENTITY, "abb") == "abb"
    assert mealy_run(PARITY, "aaa") == "101"
    with pytest.raises(UnknownSymbol):
        mealy_run(PARITY, "b")


def test_honest_teacher_examples():
    t = honest_mealy_teacher(PARITY)
    assert t.step(None, MealyEQ(PARITY)) is END
    flipped = Mealy(("a",), ("0", "1"), ((("0", 1),), (("0", 0),)))
    assert t.step(None, MealyEQ(flipped)) == ("a", None)
    later = Mealy(("a",), ("0", "1"), ((("1", 1),), (("1", 0),)))
    assert t.step(None, MealyEQ(later)) == ("aa", None)


def test_oq_response_length():
    rng = random.Random(0)
    for _ in range(500):
        m = random_mealy(rng, "ab", "01")
        w = "".join(rng.choice("ab") for _ in range(rng.randint(0, 12)))
        v, _ = honest_mealy_teacher(m).step(None, OQ(w))
        assert len(v) == len(w)


def test_semantics():
    w = "abba"
    assert mealy_semantics(OQ(w), mealy_run(IDENTITY, w))(IDENTITY)
    assert not mealy_semantics(MealyEQ(IDENTITY), "ab")(IDENTITY)
    flip_b = Mealy(("a", "b"), ("a", "b"), ((("a", 0), ("a", 0)),))
    assert mealy_semantics(MealyEQ(IDENTITY), "ab")(flip_b)


def shortest_by_scan(m1, m2):
    for w in words_up_to(m1.inputs, m1.n_states * m2.n_states):
        if mealy_run(m1, w) != mealy_run(m2, w):
            return w
    return None


def test_shortest_difference_matches_scan():
    rng = random.Random(1)
    for _ in range(300):
        m1, m2 = random_mealy(rng, "ab", "01", 3), random_mealy(rng, "ab", "01", 3)
        assert shortest_difference(m1, m2) == shortest_by_scan(m1, m2)


@settings(max_examples=200)
@given(st.integers(0, 10**6), st.text("ab", max_size=15), st.text("ab", max_size=15))
def test_length_and_prefix(seed, u, v):
    m = random_mealy(random.Random(seed), "ab", "xyz")
    assert len(mealy_run(m, u)) == len(u)
    assert mealy_run(m, u + v).startswith(mealy_run(m, u))


def test_game_legality():
    g = MealyGame("ab", "01")
    assert g.is_legal(OQ("ab"), "01") and not g.is_legal(OQ("ab"), "0")
    assert not g.is_legal(OQ("a"), "2")
    assert sorted(g.responses(OQ("ab"), 0)) == ["00", "01", "10", "11"]
    assert not g.can_terminate(OQ("a")) and g.can_terminate(MealyEQ(PARITY))


def test_honest_consistency_random_runs():
    rng = random.Random(2)
    g = MealyGame("ab", "01")
    for i in range(100):
        target = random_mealy(rng, "ab", "01")
        trace = run(random_mealy_learner(i, g), honest_mealy_teacher(target), 20)
        for r in trace.rounds:
            if r.response is not END:
                assert g.semantics(r.head, r.response)(target)


def test_enumerator_finds_small_machines():
    cls = enumerate_mealy(1, "ab", "01")
    assert len(cls) == 4
    learner = mealy_enumerator_learner(cls)
    for i, m in enumerate(cls):
        trace = run(learner, honest_mealy_teacher(m), 10)
        assert trace.ended and len(trace) == i + 1


def test_formats_round_trip():
    rng = random.Random(3)
    for _ in range(40):
        m = random_mealy(rng, "ab", "01")
        assert parse_mealy(format_mealy(m)) == m
        assert mealy_from_json(mealy_to_json(m)) == m
