"""The golden example corpus: line-delimited JSON records."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..equation import BinomialEquation, residual
from ..exppoly import ExpPoly
from ..scalar import EMPTY_TOWER, Tower
from .equations import parse_equation
from .parser import parse_expression

EXPECTED = ("Valid", "Invalid")


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    equation: str
    candidate: str
    expected: str
    note: str = ""
    tower: tuple = ()

    def tower_obj(self) -> Tower:
        return Tower.from_descriptor(self.tower) if self.tower else EMPTY_TOWER

    def parse(self) -> tuple[BinomialEquation, ExpPoly]:
        tower = self.tower_obj()
        return parse_equation(self.equation, tower), parse_expression(self.candidate, tower)

    def to_record(self) -> dict:
        out = {"id": self.id, "equation": self.equation, "candidate": self.candidate,
               "expected": self.expected, "note": self.note}
        if self.tower:
            out["tower"] = list(self.tower)
        return out


def default_corpus_path() -> Path:
    return Path(str(resources.files("binomial_ode.frontend") / "data" / "corpus.jsonl"))


def load_corpus(path: str | Path | None = None) -> list[CorpusRecord]:
    path = Path(path) if path is not None else default_corpus_path()
    records, seen = [], set()
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        if not line.strip():
            continue
        raw = json.loads(line)
        rec = CorpusRecord(
            id=raw["id"], equation=raw["equation"], candidate=raw["candidate"],
            expected=raw["expected"], note=raw.get("note", ""), tower=tuple(raw.get("tower", ())),
        )
        if rec.expected not in EXPECTED:
            raise ValueError(f"{path}:{lineno}: expected must be one of {EXPECTED}")
        if rec.id in seen:
            raise ValueError(f"{path}:{lineno}: duplicate id {rec.id!r}")
        seen.add(rec.id)
        records.append(rec)
    return records


def find_record(record_id: str, path: str | Path | None = None) -> CorpusRecord:
    for rec in load_corpus(path):
        if rec.id == record_id:
            return rec
    raise KeyError(f"no corpus record {record_id!r}")


def check_record(rec: CorpusRecord) -> dict:
    """Exact verification outcome of one record against its expectation."""
    eq, f = rec.parse()
    r = residual(eq, f)
    observed = "Valid" if r.is_zero() else "Invalid"
    return {
        "id": rec.id,
        "expected": rec.expected,
        "observed": observed,
        "residual": r.text(),
        "passed": observed == rec.expected,
        "note": rec.note,
    }
