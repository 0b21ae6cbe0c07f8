"""Executable learner/teacher games for active learning.

Learners are coalgebra-style state machines that emit queries, teachers answer
them, and the engine in :mod:`learngame.core` plays, judges and certifies the
resulting games. Concrete games live in :mod:`learngame.nat`,
:mod:`learngame.dfa` and :mod:`learngame.mealy`.
"""

from learngame.core import (
    END,
    Ended,
    GameInstance,
    IllegalResponse,
    Learner,
    Move,
    Report,
    Round,
    StepBoundCertificate,
    Teacher,
    Trace,
    check_learner_correct,
    finds_within,
    game_step,
    holds_forall,
    run,
    semantics_retraction_check,
    still_possible,
    still_possible_among,
    verify_certificate,
)
from learngame.numutil import ceil_log2, floor_log2, pow2

__all__ = [
    "END",
    "Ended",
    "GameInstance",
    "IllegalResponse",
    "Learner",
    "Move",
    "Report",
    "Round",
    "StepBoundCertificate",
    "Teacher",
    "Trace",
    "ceil_log2",
    "check_learner_correct",
    "finds_within",
    "floor_log2",
    "game_step",
    "holds_forall",
    "pow2",
    "run",
    "semantics_retraction_check",
    "still_possible",
    "still_possible_among",
    "verify_certificate",
]
