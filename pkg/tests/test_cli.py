import io
import json

import pytest

from learngame import nat
from learngame.cli import interactive_teacher, main
from learngame.core import END, run
from learngame.dfa import Dfa, DfaGame, format_dfa
from learngame.mealy import Mealy, MealyGame, format_mealy
from learngame.traces import dump_trace, load_trace


def call(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_play_nat_honest():
    code, text = call("play", "nat", "--learner", "bisect", "--teacher", "honest:2")
    assert code == 0
    recs = records(text)
    assert [(r["query"]["guess"], r["response"]) for r in recs[:-1]] == [
        (1, "too-low"), (5, "too-high"), (3, "too-high"), (2, "END"),
    ]
    assert recs[-1]["outcome"] == "ended" and recs[-1]["rounds"] == 4


def test_play_truncated_exit_2():
    code, text = call("play", "nat", "--learner", "linear", "--teacher", "const-too-low", "--max-rounds", "5")
    assert code == 2
    assert records(text)[-1]["outcome"] == "truncated"


@pytest.mark.parametrize(
    "argv,field",
    [
        (["play", "nat", "--learner", "bisect", "--teacher", "honest:x"], "--teacher"),
        (["play", "nat", "--learner", "nope", "--teacher", "honest:1"], "--learner"),
        (["play", "nat", "--learner", "bisect", "--teacher", "adversarial:5:1"], "--teacher"),
        (["play", "dfa", "--learner", "enumerator", "--class", "x", "--teacher", "regex:a*"], "--class"),
        (["play", "dfa", "--learner", "enumerator", "--class", "2-states-a", "--teacher", "regex:(a"], "--teacher"),
        (["play", "dfa", "--learner", "enumerator", "--class", "2-states-a", "--teacher", "dfa:/no/such"], "--teacher"),
        (["minimax", "--candidates", "0"], "--candidates"),
    ],
)
def test_config_errors_name_the_field(argv, field, capsys):
    code, _ = call(*argv)
    assert code == 1
    assert field in capsys.readouterr().err


def test_play_dfa_from_file(tmp_path):
    path = tmp_path / "t.dfa"
    path.write_text(format_dfa(Dfa(("a",), (False, True), ((1,), (0,)))))
    code, text = call("play", "dfa", "--learner", "enumerator", "--class", "2-states-a", "--teacher", f"dfa:{path}")
    assert code == 0
    assert records(text)[-1]["outcome"] == "ended"


def test_play_mealy(tmp_path):
    m = Mealy(("a",), ("0", "1"), ((("1", 1),), (("0", 0),)))
    path = tmp_path / "p.mealy"
    path.write_text(format_mealy(m))
    code, text = call("play", "mealy", "--class", "2-states-a-01", "--learner", "enumerator", "--teacher", f"mealy:{path}")
    assert code == 0


def test_output_file(tmp_path):
    path = tmp_path / "trace.jsonl"
    code, text = call("play", "nat", "--learner", "log", "--teacher", "honest:9", "-o", str(path))
    assert code == 0 and text == ""
    trace = load_trace(path.read_text(), nat.NAT)
    assert trace.ended and trace.rounds[-1].head == nat.Guess(9)


def test_trace_round_trip_bytes():
    for learner, teacher, game in [
        (nat.bisect_learner(), nat.honest_teacher(37), nat.NAT),
        (nat.linear_learner(), nat.constant_too_low_teacher(), nat.NAT),
    ]:
        trace = run(learner, teacher, 10)
        text = dump_trace(trace, game)
        assert dump_trace(load_trace(text, game), game) == text
    code, text = call("play", "dfa", "--learner", "enumerator", "--class", "2-states-ab", "--teacher", "regex:(ab)*")
    assert dump_trace(load_trace(text, DfaGame("ab")), DfaGame("ab")) == text
    with pytest.raises(ValueError):
        load_trace(text.splitlines()[:-1], DfaGame("ab"))


def test_interactive_teacher():
    stdin = io.StringIO("maybe\nl\nh\nc\n")
    err = io.StringIO()
    t = interactive_teacher(stdin, err)
    trace = run(nat.bisect_learner(), t, 10)
    assert trace.ended
    assert [r.response for r in trace.rounds] == [nat.TOO_LOW, nat.TOO_HIGH, END]
    assert "unrecognised" in err.getvalue()
    with pytest.raises(EOFError):
        t.step(None, nat.Guess(3))


def test_verify_bound_exit_codes():
    assert call("verify-bound", "nat", "--learner", "log", "--d-max", "256")[0] == 0
    code, text = call("verify-bound", "nat", "--learner", "bisect", "--bound", "1", "--d-max", "8")
    assert code == 1 and "2" in text
    assert call("verify-bound", "nat", "--learner", "linear", "--bound", "linear", "--d-max", "64")[0] == 0
    assert call("verify-bound", "dfa", "--learner", "enumerator", "--class", "2-states-a")[0] == 0


def test_verify_bound_json():
    code, text = call("verify-bound", "nat", "--learner", "log", "--d-max", "64", "--json")
    payload = json.loads(text)
    assert code == 0 and payload


def test_lower_bound_and_minimax():
    code, _ = call("lower-bound", "nat", "--learner", "bisect", "--learner", "log", "--random-learners", "5")
    assert code == 0
    code, _ = call("lower-bound", "dfa-restricted", "--word-len", "4", "--queries", "10",
                   "--learner", "enumerator", "--random-learners", "3")
    assert code == 0
    code, text = call("minimax", "--candidates", "101")
    assert code == 0 and "7" in text


def test_retraction_check_cli():
    code, _ = call("retraction-check", "--samples", "50", "--seed", "3")
    assert code == 0
