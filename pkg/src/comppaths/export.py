"""Line-delimited JSON records for derivations, traces, cells and reports.

Every record carries ``type`` and ``version``.  Paths are stored in the
compact syntax so they re-parse with :func:`parse_path`.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Iterator

from .laws import LawReport
from .paths import Path, parse_path, print_path, skeleton
from .rewrite import (
    RwRule,
    RwSequence,
    RwStep,
    format_path_position,
    parse_path_position,
    path_digest,
    replay,
    rw_contract,
)
from .rewrite2 import TwoCell, canonical_digest
from .terms import Conversion, format_position, print_term

VERSION = 1


def dumps(record: dict[str, Any]) -> str:
    rest = {k: v for k, v in record.items() if k != "type"}
    return json.dumps({"type": record["type"], "version": VERSION, **rest}, ensure_ascii=False)


def loads(lines: Iterable[str]) -> Iterator[dict[str, Any]]:
    for line in lines:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        if rec.get("version") != VERSION:
            raise ValueError(f"unsupported record version {rec.get('version')!r}")
        yield rec


def derivation_record(conv: Conversion, path: Path) -> dict[str, Any]:
    return {
        "type": "derivation",
        "source": print_term(conv.source),
        "target": print_term(conv.target),
        "path": print_path(path),
        "paper": print_path(path, "paper"),
        "shape": skeleton(path),
        "steps": [
            {"kind": s.kind.value, "pos": format_position(s.pos), "forward": s.forward}
            for s in conv.steps
        ],
    }


def step_record(step: RwStep) -> dict[str, Any]:
    return {
        "type": "rwstep",
        "rule": step.rule.value,
        "at": format_path_position(step.at),
        "direction": step.direction,
        "before": path_digest(step.before),
        "after": path_digest(step.after),
    }


def sequence_records(seq: RwSequence, kind: str = "trace") -> list[dict[str, Any]]:
    head = {
        "type": kind,
        "start": print_path(seq.start),
        "end": print_path(seq.end),
        "length": len(seq),
    }
    return [head] + [step_record(s) for s in seq.steps]


def cell_record(c: TwoCell) -> dict[str, Any]:
    return {
        "type": "cell",
        "start": print_path(c.source),
        "end": print_path(c.target),
        "steps": [
            {"rule": s.rule.value, "at": format_path_position(s.at), "direction": s.direction}
            for s in c.steps
        ],
        "canonical": canonical_digest(c.canonical),
    }


def law_record(rep: LawReport, seed: int | None = None, index: int | None = None) -> dict[str, Any]:
    rec: dict[str, Any] = {
        "type": "law",
        "law": rep.law,
        "verdict": rep.verdict_text,
        "seed": seed,
        "index": index,
        "detail": rep.detail,
        "gap": rep.gap,
    }
    if isinstance(rep.witness, RwSequence):
        rec["witness"] = [canonical_digest(rep.witness)]
    elif isinstance(rep.witness, tuple):
        rec["witness"] = [w.digest() for w in rep.witness if isinstance(w, TwoCell)]
    if not rep.verdict:
        rec["instance"] = [
            cell_record(x) if isinstance(x, TwoCell) else print_path(x) for x in rep.instance
        ]
    return rec


def sequence_from_records(records: list[dict[str, Any]]) -> RwSequence:
    """Rebuild a trace from its header and step records, re-deriving each
    path through the rules and checking the recorded digests."""
    head, rest = records[0], records[1:]
    cur = parse_path(head["start"])
    steps = []
    for rec in rest:
        rule, at = RwRule(rec["rule"]), parse_path_position(rec["at"])
        if path_digest(cur) != rec["before"]:
            raise ValueError("trace record does not match the replayed path")
        if rec["direction"] != "forward":
            raise ValueError("reversed steps cannot be replayed from digests alone")
        after = rw_contract(cur, rule, at)
        if path_digest(after) != rec["after"]:
            raise ValueError("trace record does not match the replayed path")
        steps.append(RwStep(cur, after, rule, at, True))
        cur = after
    seq = RwSequence(parse_path(head["start"]), tuple(steps))
    replay(seq)
    if seq.end != parse_path(head["end"]):
        raise ValueError("trace ends somewhere else")
    return seq
