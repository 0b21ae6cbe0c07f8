"""JSON-lines trace files: one record per round plus a closing outcome record."""

from __future__ import annotations

import json
from typing import Iterable

from learngame.core import END, GameInstance, Outcome, Round, Trace


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def trace_records(trace: Trace, instance: GameInstance) -> list[dict]:
    records = []
    for r in trace.rounds:
        resp = "END" if r.response is END else instance.response_to_json(r.response)
        records.append({"round": r.index, "query": instance.head_to_json(r.head), "response": resp})
    result = instance.result_to_json(trace.result) if trace.ended else None
    records.append({"outcome": trace.outcome.value, "result": result, "rounds": len(trace.rounds)})
    return records


def dump_trace(trace: Trace, instance: GameInstance) -> str:
    return "".join(_dumps(rec) + "\n" for rec in trace_records(trace, instance))


def load_trace(lines: str | Iterable[str], instance: GameInstance) -> Trace:
    if isinstance(lines, str):
        lines = lines.splitlines()
    trace = Trace()
    closed = False
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if closed:
            raise ValueError("record after the outcome record")
        rec = json.loads(line)
        if "outcome" in rec:
            trace.outcome = Outcome(rec["outcome"])
            trace.result = instance.result_from_json(rec["result"]) if trace.ended else None
            if rec["rounds"] != len(trace.rounds):
                raise ValueError(f"outcome says {rec['rounds']} rounds, trace has {len(trace.rounds)}")
            closed = True
            continue
        if rec["round"] != len(trace.rounds):
            raise ValueError(f"round {rec['round']} out of sequence")
        resp = END if rec["response"] == "END" else instance.response_from_json(rec["response"])
        trace.rounds.append(Round(rec["round"], instance.head_from_json(rec["query"]), resp))
    if not closed:
        raise ValueError("trace has no outcome record")
    return trace
