"""Command line front end: play games, verify bounds, probe lower bounds."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path
from typing import Callable, TextIO

from learngame import dfa, mealy, nat
from learngame.core import (
    END,
    IllegalResponse,
    Learner,
    Move,
    Report,
    Teacher,
    check_learner_correct,
    run,
    semantics_retraction_check,
    still_possible_among,
    verify_certificate,
)
from learngame.numutil import floor_log2
from learngame.regex import RegexParseError, compile_regex
from learngame.traces import dump_trace

GAMES = ("nat", "dfa", "dfa-restricted", "dfa-ce-size", "mealy")


class ConfigError(Exception):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


# -- spec parsing -----------------------------------------------------------------

def _int(field: str, text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(field, f"expected an integer, got {text!r}") from None
    if value < 0:
        raise ConfigError(field, f"expected a non-negative integer, got {value}")
    return value


def interactive_teacher(stdin: TextIO = sys.stdin, stderr: TextIO = sys.stderr) -> Teacher:
    """Ask a human for each answer; re-prompts until it gets high/low/correct."""
    answers = {
        "h": nat.TOO_HIGH, "high": nat.TOO_HIGH, "too-high": nat.TOO_HIGH,
        "l": nat.TOO_LOW, "low": nat.TOO_LOW, "too-low": nat.TOO_LOW,
        "c": END, "correct": END,
    }

    def step(s, head):
        while True:
            stderr.write(f"guess {head.value}: [h]igh / [l]ow / [c]orrect? ")
            stderr.flush()
            line = stdin.readline()
            if not line:
                raise EOFError("no more input for the interactive teacher")
            a = answers.get(line.strip().lower())
            if a is END:
                return END
            if a is not None:
                return a, s
            stderr.write(f"unrecognised answer {line.strip()!r}\n")

    return Teacher(None, step, name="interactive")


def _load_file(field: str, path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ConfigError(field, f"cannot read {path}: {exc.strerror}") from None


def _alphabet(args) -> tuple[str, ...] | None:
    if getattr(args, "alphabet", None):
        return tuple(args.alphabet)
    if getattr(args, "cls", None) and args.game != "mealy":
        return dfa.parse_class_spec(args.cls)[1]
    return None


def _dfa_target(spec: str, args) -> dfa.Dfa:
    kind, _, rest = spec.partition(":")
    if kind == "dfa" and rest:
        try:
            return dfa.parse_dfa(_load_file("--teacher", rest))
        except dfa.DfaFormatError as exc:
            raise ConfigError("--teacher", str(exc)) from None
    if kind == "regex" and rest:
        try:
            return compile_regex(rest, _alphabet(args))
        except RegexParseError as exc:
            raise ConfigError("--teacher", str(exc)) from None
    raise ConfigError("--teacher", f"unknown DFA target {spec!r} (use dfa:<path> or regex:<pattern>)")


def make_teacher(args) -> Teacher:
    spec = args.teacher
    if spec is None:
        raise ConfigError("--teacher", "required")
    game = args.game
    if game == "nat":
        if spec == "const-too-low":
            return nat.constant_too_low_teacher()
        if spec == "interactive":
            return interactive_teacher()
        kind, _, rest = spec.partition(":")
        if kind == "honest" and rest:
            return nat.honest_teacher(_int("--teacher", rest))
        if kind == "adversarial" and rest.count(":") == 1:
            lo, hi = (_int("--teacher", x) for x in rest.split(":"))
            if lo > hi:
                raise ConfigError("--teacher", "adversarial interval needs lo <= hi")
            return nat.adversarial_teacher(lo, hi)
        raise ConfigError("--teacher", f"unknown nat teacher {spec!r}")
    if game == "mealy":
        kind, _, rest = spec.partition(":")
        if kind != "mealy" or not rest:
            raise ConfigError("--teacher", f"unknown mealy teacher {spec!r} (use mealy:<path>)")
        try:
            return mealy.honest_mealy_teacher(mealy.parse_mealy(_load_file("--teacher", rest)))
        except dfa.DfaFormatError as exc:
            raise ConfigError("--teacher", str(exc)) from None
    if game == "dfa-restricted":
        kind, _, rest = spec.partition(":")
        if kind == "adversarial":
            n = _int("--teacher", rest) if rest else args.word_len
            return dfa.restricted_adversarial_teacher(n, _alphabet(args) or ("a", "b"))
        return dfa.honest_restricted_teacher(_dfa_target(spec, args))
    return dfa.honest_dfa_teacher(_dfa_target(spec, args))


def _mealy_class(spec: str) -> tuple[int, str, str]:
    try:
        k, word, ins, outs = spec.split("-")
        if word != "states" or not ins or not outs:
            raise ValueError
        return int(k), ins, outs
    except ValueError:
        raise ConfigError("--class", f"bad mealy class {spec!r}, expected <k>-states-<inputs>-<outputs>") from None


def make_learner(args, spec: str | None = None) -> Learner:
    spec = spec or args.learner
    if spec is None:
        raise ConfigError("--learner", "required")
    game = args.game
    kind, _, rest = spec.partition(":")
    if game == "nat":
        fixed = {"linear": nat.linear_learner, "bisect": nat.bisect_learner, "log": nat.certified_log_learner}
        if spec in fixed:
            return fixed[spec]()
        if kind == "random":
            return nat.random_learner(_int("--learner", rest or str(args.seed)))
        raise ConfigError("--learner", f"unknown nat learner {spec!r}")

    if game == "mealy":
        k, ins, outs = _mealy_class(args.cls or "1-states-ab-01")
        if spec == "enumerator":
            return mealy.mealy_enumerator_learner(mealy.enumerate_mealy(k, ins, outs))
        if kind == "random":
            seed = _int("--learner", rest or str(args.seed))
            return mealy.random_mealy_learner(seed, mealy.MealyGame(ins, outs))
        raise ConfigError("--learner", f"unknown mealy learner {spec!r}")

    if game == "dfa-restricted":
        alphabet = _alphabet(args) or ("a", "b")
        if spec == "enumerator":
            return dfa.enumerator_learner(
                dfa.singleton_class(args.word_len, alphabet), dfa.RestrictedDfaGame(alphabet)
            )
        if kind == "random":
            return dfa.random_restricted_learner(_int("--learner", rest or str(args.seed)), args.word_len, alphabet)
        raise ConfigError("--learner", f"unknown dfa-restricted learner {spec!r}")

    try:
        k, alphabet = dfa.parse_class_spec(args.cls or "2-states-ab")
    except ValueError as exc:
        raise ConfigError("--class", str(exc)) from None
    if args.alphabet:
        alphabet = tuple(args.alphabet)
    instance = dfa.CeSizeDfaGame(alphabet) if game == "dfa-ce-size" else dfa.DfaGame(alphabet)
    if spec == "enumerator":
        return dfa.enumerator_learner(dfa.enumerate_dfas(k, alphabet), instance)
    if spec == "consistent":
        probes = list(dfa.words_up_to(alphabet, 2))
        return dfa.consistent_learner(dfa.enumerate_dfas(k, alphabet), probes, instance)
    if kind == "random":
        return dfa.random_dfa_learner(_int("--learner", rest or str(args.seed)), instance)
    raise ConfigError("--learner", f"unknown {game} learner {spec!r}")


def _parse_bound(text: str) -> Callable[[int], int]:
    if text == "log":
        return nat.log_bound
    if text == "linear":
        return lambda d: 1 + d
    value = _int("--bound", text)
    return lambda d: value


# -- reporting ------------------------------------------------------------------

def _emit(args, payload: dict, lines: list[str], out: TextIO) -> None:
    if args.json:
        out.write(json.dumps(payload, default=repr) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


def _report_payload(name: str, report: Report) -> dict:
    return {
        "check": name,
        "ok": report.ok,
        "checked": report.checked,
        "states_explored": report.states_explored,
        "depth": report.depth,
        "enum_bound": report.enum_bound,
        "violations": [str(v) for v in report.violations],
    }


# -- commands ---------------------------------------------------------------------

def cmd_play(args, out: TextIO) -> int:
    learner = make_learner(args)
    teacher = make_teacher(args)
    try:
        trace = run(learner, teacher, args.max_rounds)
    except IllegalResponse as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    text = dump_trace(trace, learner.instance)
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return 0 if trace.ended else 2


def cmd_verify_bound(args, out: TextIO) -> int:
    learner = make_learner(args)
    reports: list[tuple[str, Report]] = []
    if args.game == "nat":
        sample = list(range(args.d_max + 1))
        cert = None if args.bound else learner.certificate
        if args.bound:
            bound = _parse_bound(args.bound)
        elif cert is not None:
            bound = cert.bound
        else:
            raise ConfigError("--bound", f"learner {learner.name!r} has no certificate; pass --bound")
        if cert is not None:
            depth = args.depth if args.depth is not None else max(cert.bound(d) for d in sample)
            reports.append(("certificate", verify_certificate(learner, cert, sample, depth, 0)))
        teachers = [
            nat.honest_teacher,
            nat.constant_too_low_teacher(),
            nat.adversarial_teacher(0, 2 * args.d_max + 1),
        ]
        reports.append(("learner-correct", check_learner_correct(learner, bound, teachers, sample)))
    elif args.game in ("dfa", "dfa-restricted"):
        if learner.certificate is None:
            raise ConfigError("--learner", f"learner {learner.name!r} has no certificate")
        cert = learner.certificate
        if args.game == "dfa":
            k, alphabet = dfa.parse_class_spec(args.cls or "2-states-ab")
            sample = dfa.enumerate_dfas(k, alphabet)
            teacher_family = dfa.honest_dfa_teacher
            enum_bound = 4 * k
        else:
            sample = dfa.singleton_class(args.word_len, _alphabet(args) or ("a", "b"))
            teacher_family = dfa.honest_restricted_teacher
            enum_bound = 0
        depth = args.depth if args.depth is not None else len(sample) + 1
        reports.append(("certificate", verify_certificate(learner, cert, sample, depth, enum_bound)))
        reports.append(("learner-correct", check_learner_correct(learner, cert, [teacher_family], sample)))
    else:
        raise ConfigError("game", f"verify-bound does not support {args.game!r}")

    ok = all(r.ok for _, r in reports)
    lines = []
    for name, r in reports:
        lines.append(f"{name}: {'ok' if r.ok else 'FAILED'} ({r.summary()})")
        lines.extend(f"  {v}" for v in r.violations[: args.show])
        if len(r.violations) > args.show:
            lines.append(f"  ... {len(r.violations) - args.show} more")
    _emit(args, {"ok": ok, "reports": [_report_payload(n, r) for n, r in reports]}, lines, out)
    return 0 if ok else 1


def cmd_lower_bound(args, out: TextIO) -> int:
    rng = random.Random(args.seed)
    specs = args.learner or (["bisect"] if args.game == "nat" else ["enumerator"])
    learners = [make_learner(args, s) for s in specs]
    if args.game == "nat":
        for _ in range(args.random_learners):
            learners.append(nat.random_learner(rng.randrange(1 << 30), args.lo, args.lo + args.m))
        rounds = floor_log2(args.m)
        teacher = nat.adversarial_teacher(args.lo, args.lo + args.m)
        candidates = range(args.lo, args.lo + args.m + 1)
    elif args.game == "dfa-restricted":
        alphabet = _alphabet(args) or ("a", "b")
        for _ in range(args.random_learners):
            learners.append(dfa.random_restricted_learner(rng.randrange(1 << 30), args.word_len, alphabet))
        rounds = args.queries
        teacher = dfa.restricted_adversarial_teacher(args.word_len, alphabet)
        candidates = dfa.singleton_class(args.word_len, alphabet)
    else:
        raise ConfigError("game", f"lower-bound supports nat and dfa-restricted, not {args.game!r}")

    rows = []
    failed = None
    for learner in learners:
        alive = still_possible_among(learner, teacher, candidates, rounds)
        witness = alive[0] if alive else None
        if args.game == "dfa-restricted" and witness is not None:
            witness = dfa.singleton_word(witness, args.word_len)
        rows.append({"learner": learner.name, "rounds": rounds, "survivors": len(alive), "witness": witness})
        if witness is None and failed is None:
            failed = learner
    lines = [
        f"{r['learner']}: rounds={r['rounds']} survivors={r['survivors']} witness={r['witness']!r}"
        for r in rows
    ]
    if failed is not None:
        lines.append(f"no witness for {failed.name}; trace follows")
        lines.append(dump_trace(run(failed, teacher, rounds), failed.instance).rstrip())
    _emit(args, {"ok": failed is None, "learners": rows}, lines, out)
    return 0 if failed is None else 1


def cmd_minimax(args, out: TextIO) -> int:
    if args.candidates < 1:
        raise ConfigError("--candidates", "must be >= 1")
    value = nat.minimax_optimal_rounds(args.candidates)
    _emit(args, {"candidates": args.candidates, "rounds": value}, [str(value)], out)
    return 0


def retraction_instances(alphabet=("a", "b")) -> dict:
    return {
        "nat": nat.NAT,
        "dfa": dfa.DfaGame(alphabet),
        "dfa-restricted": dfa.RestrictedDfaGame(alphabet),
        "dfa-ce-size": dfa.CeSizeDfaGame(alphabet),
        "mealy": mealy.MealyGame(alphabet, ("0", "1")),
    }


def random_move(instance, rng: random.Random):
    """A query head with an arbitrary (seeded, deterministic) continuation."""
    head = instance.random_head(rng)
    salt = rng.randrange(1 << 30)
    return Move(head, lambda resp: (salt, repr(resp)))


def cmd_retraction_check(args, out: TextIO) -> int:
    rng = random.Random(args.seed)
    instances = retraction_instances()
    names = list(instances) if args.game in (None, "all") else [args.game]
    rows = []
    for name in names:
        instance = instances[name]
        passed = sum(
            semantics_retraction_check(instance, random_move(instance, rng), enum_bound=3)
            for _ in range(args.samples)
        )
        rows.append({"game": name, "samples": args.samples, "passed": passed})
    ok = all(r["passed"] == r["samples"] for r in rows)
    lines = [f"{r['game']}: {r['passed']}/{r['samples']}" for r in rows]
    _emit(args, {"ok": ok, "games": rows}, lines, out)
    return 0 if ok else 1


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-rounds", type=int, default=100)
    common.add_argument("-v", "--verbose", action="store_true")

    game_opts = argparse.ArgumentParser(add_help=False)
    game_opts.add_argument("game", choices=GAMES)
    game_opts.add_argument("--class", dest="cls", help="concept class, e.g. 2-states-a")
    game_opts.add_argument("--alphabet", help="input symbols, e.g. ab")
    game_opts.add_argument("--word-len", type=int, default=8, help="candidate word length (dfa-restricted)")

    parser = argparse.ArgumentParser(prog="learngame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", parents=[common, game_opts], help="run one game and print its trace")
    p.add_argument("--learner")
    p.add_argument("--teacher")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("verify-bound", parents=[common, game_opts], help="check a learner's query bound")
    p.add_argument("--learner")
    p.add_argument("--bound", help="integer constant, 'log' or 'linear'; default: the learner's certificate")
    p.add_argument("--d-max", type=int, default=1024)
    p.add_argument("--depth", type=int)
    p.add_argument("--show", type=int, default=20, help="violations to list")
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("lower-bound", parents=[common, game_opts], help="run learners against an adversary")
    p.add_argument("--learner", action="append")
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--m", type=int, default=99)
    p.add_argument("--queries", type=int, default=100)
    p.add_argument("--random-learners", type=int, default=0)
    p.set_defaults(func=cmd_lower_bound)

    p = sub.add_parser("minimax", parents=[common], help="optimal worst-case guesses")
    p.add_argument("--candidates", type=int, default=101)
    p.set_defaults(func=cmd_minimax)

    p = sub.add_parser("retraction-check", parents=[common], help="check the semantics retraction law")
    p.add_argument("--game", choices=GAMES + ("all",), default="all")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_retraction_check)
    return parser


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.max_rounds < 0:
        sys.stderr.write("error: --max-rounds: must be >= 0\n")
        return 1
    try:
        return args.func(args, out)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
