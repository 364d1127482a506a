"""Solution families, their parameters, and classification reports."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from ..equation import BinomialEquation, verify
from ..errors import MissingBinding, RelationViolated
from ..exppoly import ExpPoly
from ..scalar import EMPTY_TOWER, Scalar, Tower
from .solve import wider


class Status(enum.Enum):
    VerifiedExact = "VerifiedExact"
    ParametricVerified = "ParametricVerified"
    AnsatzOnly = "AnsatzOnly"


class Kind(enum.Enum):
    FREE = "free"
    SOLVED = "solved"  # finitely many exact values (roots of ``relation``)
    DERIVED = "derived"  # explicit expression in earlier parameters


@dataclass(frozen=True)
class Parameter:
    name: str
    kind: Kind
    relation: Scalar | None = None  # must vanish once all parameters are bound
    values: tuple[Scalar, ...] = ()
    nonzero: bool = True
    excluded: tuple[Scalar, ...] = ()

    @property
    def symbol(self) -> Scalar:
        return Scalar.unit(self.name)

    def relation_text(self) -> str:
        if self.kind is Kind.FREE:
            return "free"
        return f"{self.relation.text()} = 0"

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "relation": self.relation_text(),
            "values": [v.text() for v in self.values],
            "nonzero": self.nonzero,
            "excluded": [v.text() for v in self.excluded],
        }


def free(name: str, nonzero: bool = True, excluded=()) -> Parameter:
    return Parameter(name, Kind.FREE, nonzero=nonzero, excluded=tuple(excluded))


def solved(name: str, relation: Scalar, roots, nonzero: bool = True) -> Parameter:
    return Parameter(name, Kind.SOLVED, relation=relation, values=tuple(roots), nonzero=nonzero)


def derived(name: str, expression: Scalar, nonzero: bool = True) -> Parameter:
    return Parameter(name, Kind.DERIVED, relation=Scalar.unit(name) - expression, values=(expression,), nonzero=nonzero)


@dataclass
class SolutionFamily:
    """``form`` describes ``f`` (or ``f^(derivative_order)``) in the parameter symbols."""

    provenance: str
    form: ExpPoly
    parameters: list[Parameter] = field(default_factory=list)
    status: Status = Status.AnsatzOnly
    derivative_order: int = 0
    note: str = ""

    @property
    def tower(self) -> Tower:
        t = EMPTY_TOWER
        for p in self.form.terms.values():
            for c in p.coeffs:
                t = wider(t, c.tower)
        for q in self.form.terms:
            for c in q.coeffs:
                t = wider(t, c.tower)
        for prm in self.parameters:
            for v in prm.values + prm.excluded:
                t = wider(t, v.tower)
        return t

    def free_names(self) -> list[str]:
        return [p.name for p in self.parameters if p.kind is Kind.FREE]

    def branches(self) -> Iterator[dict[str, Scalar]]:
        """Bindings of every solved/derived parameter, free ones left symbolic."""
        solved_params = [p for p in self.parameters if p.kind is Kind.SOLVED]
        for combo in itertools.product(*(p.values for p in solved_params)):
            mapping = {p.name: v for p, v in zip(solved_params, combo)}
            for p in self.parameters:
                if p.kind is Kind.DERIVED:
                    mapping[p.name] = p.values[0].subs(mapping)
            yield mapping

    def instances(self) -> Iterator[tuple[dict[str, Scalar], ExpPoly]]:
        for mapping in self.branches():
            yield mapping, self.form.subs(mapping)

    def verify_against(self, eq: BinomialEquation) -> bool:
        if self.derivative_order:
            return False
        return all(verify(eq, f) for _, f in self.instances())

    def text(self) -> str:
        lhs = "f" + "'" * self.derivative_order
        return f"{lhs} = {self.form.text()}"

    def to_record(self) -> dict:
        return {
            "provenance": self.provenance,
            "status": self.status.value,
            "derivative_order": self.derivative_order,
            "form": [{"coefficient": p.text(), "exponent": q.text()} for q, p in self.form.sorted_terms()],
            "form_text": self.text(),
            "parameters": [p.to_record() for p in self.parameters],
            "instances": [f.text() for _, f in self.instances()] if self.status is not Status.AnsatzOnly else [],
            "tower": self.tower.describe(),
            "note": self.note,
        }


def instantiate_family(family: SolutionFamily, bindings: Mapping[str, object]) -> ExpPoly:
    """Concrete ``ExpPoly`` for ``bindings``; derived parameters default to their formula."""
    mapping: dict[str, Scalar] = {}
    for p in family.parameters:
        if p.name in bindings:
            v = Scalar.coerce(bindings[p.name])
        elif p.kind is Kind.DERIVED:
            v = p.values[0].subs(mapping)
        else:
            raise MissingBinding(f"parameter {p.name!r} needs a value")
        if p.nonzero and v.is_zero():
            raise RelationViolated(f"parameter {p.name!r} must be nonzero")
        for ex in p.excluded:
            if (v - ex.subs(mapping)).is_zero():
                raise RelationViolated(f"parameter {p.name!r} may not equal {ex.text()}")
        mapping[p.name] = v
    for p in family.parameters:
        if p.relation is not None and not p.relation.subs(mapping).is_zero():
            raise RelationViolated(f"binding violates {p.relation_text()}")
    return family.form.subs(mapping)


@dataclass(frozen=True)
class Diagnostic:
    name: str
    expected: str
    observed: str
    passed: bool | None  # None: check not applicable

    def to_record(self) -> dict:
        return {"name": self.name, "expected": self.expected, "observed": self.observed, "pass": self.passed}


class Classification(list):
    """List of families plus the diagnostics and notes gathered while classifying."""

    def __init__(self, families=(), diagnostics=(), notes=()):
        super().__init__(families)
        self.diagnostics: list[Diagnostic] = list(diagnostics)
        self.notes: list[str] = list(notes)

    @property
    def families(self) -> list[SolutionFamily]:
        return list(self)

    def by_provenance(self, label: str) -> list[SolutionFamily]:
        return [f for f in self if f.provenance == label]

    def to_record(self) -> dict:
        return {
            "families": [f.to_record() for f in self],
            "diagnostics": [d.to_record() for d in self.diagnostics],
            "notes": list(self.notes),
        }
