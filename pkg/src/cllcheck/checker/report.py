"""Plain-data records for verdicts, used by the structured CLI output."""

from __future__ import annotations

import json
from fractions import Fraction

from ..pef.times import SymbolicTime
from .intervals import SymbolicInterval


def time_record(t: SymbolicTime) -> dict:
    if t.is_exact:
        return {"kind": "rational", "value": str(t.value), "approx": float(t.value)}
    b = t.root.best
    return {
        "kind": "root",
        "pef": t.root.pef.describe(),
        "low": str(b.low),
        "high": str(b.high),
        "offset": str(t.offset),
        "approx": t.approx(),
    }


def interval_record(iv: SymbolicInterval | None) -> dict | None:
    if iv is None:
        return None
    return {
        "low": time_record(iv.low),
        "high": time_record(iv.high),
        "low_closed": iv.low_closed,
        "high_closed": iv.high_closed,
    }


def verdict_record(verdict, *, intervals=(), margins=()) -> dict:
    """Stable keys: verdict, witness, intervals, margins (plus formula)."""
    return {
        "verdict": "SAT" if verdict.satisfied else "UNSAT",
        "formula": verdict.formula,
        "witness": [
            {"level": w.level, "time": time_record(w.time), "run": interval_record(w.run)}
            for w in verdict.witness
        ],
        "intervals": list(intervals),
        "margins": list(margins),
    }


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True)


def loads(line: str) -> dict:
    return json.loads(line)


def time_from_record(rec: dict) -> tuple:
    """A comparable summary (kind, exact endpoints) of a serialized time."""
    if rec["kind"] == "rational":
        return ("rational", Fraction(rec["value"]))
    return ("root", rec["pef"], Fraction(rec["low"]), Fraction(rec["high"]), Fraction(rec["offset"]))
