"""Closed-world consistency checks over a materialized graph.

Two checks, two severities:

- disjointness clashes (errors): an individual typed into two classes of
  the same declared disjoint set;
- unsatisfied existential obligations (warnings, closed world only): an
  instance of a class carrying an obligation ``(C, p, D)`` with no asserted
  or derived ``p`` edge to an individual entailed to be in ``D``.

Open-world mode reports no obligation warnings at all, since an unseen
witness may simply be unstated.  Reports are deterministic: violations are
sorted, and the report carries a sha256 digest of the raw input graph in
canonical N-Triples form so downstream tooling can tell which data was
checked.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .graph import Graph
from .schema import SchemaIndex, extract_schema
from .terms import RDF_TYPE, Term, Triple, iri

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"

_TYPE = iri(RDF_TYPE)


@dataclass(frozen=True)
class Violation:
    kind: str  # "disjointness-clash" | "unsatisfied-obligation"
    severity: str
    subject: str
    detail: tuple[str, ...]

    def message(self) -> str:
        if self.kind == "disjointness-clash":
            return f"{self.subject} is typed into disjoint classes {self.detail[0]} and {self.detail[1]}"
        on_class, prop, filler = self.detail
        return (
            f"{self.subject} is a {on_class} but has no {prop} link to any {filler} "
            "(closed-world check)"
        )

    def sort_key(self) -> tuple:
        return (self.kind, self.subject, self.detail)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "severity": self.severity,
            "subject": self.subject,
            "detail": list(self.detail),
            "message": self.message(),
        }


def check_disjointness(graph: Graph, schema: SchemaIndex) -> list[Violation]:
    """Every individual typed into >= 2 classes of one disjoint set, as one
    violation per offending class pair."""
    violations: list[Violation] = []
    for disjoint_set in schema.disjoint_sets:
        members = sorted(disjoint_set)
        holders: dict[str, list[Term]] = {
            cls: [t.s for t in graph.match(None, _TYPE, iri(cls))] for cls in members
        }
        for i, first in enumerate(members):
            first_holders = set(holders[first])
            if not first_holders:
                continue
            for second in members[i + 1:]:
                for subject in sorted(first_holders & set(holders[second]), key=Term.sort_key):
                    violations.append(
                        Violation(
                            "disjointness-clash",
                            SEVERITY_ERROR,
                            _render(subject),
                            (first, second),
                        )
                    )
    return sorted(set(violations), key=Violation.sort_key)


def check_obligations(graph: Graph, schema: SchemaIndex, mode: str = "closed") -> list[Violation]:
    """Audit existential obligations; closed world warns, open world trusts.

    The graph is expected to be materialized already, so entailed types and
    derived property edges are direct lookups.
    """
    if mode not in ("closed", "open"):
        raise ValueError(f"unknown validation mode: {mode!r}")
    if mode == "open":
        return []
    violations: list[Violation] = []
    for obligation in schema.obligations:
        filler = iri(obligation.filler)
        prop = iri(obligation.property)
        for holder in graph.subjects(_TYPE, iri(obligation.on_class)):
            satisfied = any(
                not t.o.is_literal() and Triple(t.o, _TYPE, filler) in graph
                for t in graph.match(holder, prop, None)
            )
            if not satisfied:
                violations.append(
                    Violation(
                        "unsatisfied-obligation",
                        SEVERITY_WARNING,
                        _render(holder),
                        (obligation.on_class, obligation.property, obligation.filler),
                    )
                )
    return sorted(set(violations), key=Violation.sort_key)


def _render(term: Term) -> str:
    return term.value if term.is_iri() else f"_:{term.value}"


def inputs_digest(graph: Graph) -> str:
    """sha256 over the canonical N-Triples form of a graph."""
    from .turtle import canonical_ntriples

    return hashlib.sha256(canonical_ntriples(graph).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    mode: str
    digest: str

    @property
    def error_count(self) -> int:
        return sum(1 for v in self.violations if v.severity == SEVERITY_ERROR)

    @property
    def warning_count(self) -> int:
        return sum(1 for v in self.violations if v.severity == SEVERITY_WARNING)

    def counts_by_kind(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for violation in self.violations:
            counts[violation.kind] = counts.get(violation.kind, 0) + 1
        return dict(sorted(counts.items()))

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "inputs_digest": self.digest,
            "counts": {
                "error": self.error_count,
                "warning": self.warning_count,
                "by_kind": self.counts_by_kind(),
            },
            "violations": [v.to_json() for v in self.violations],
        }

    def render_json(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def validate_graph(raw_graph: Graph, schema: SchemaIndex | None = None, mode: str = "closed") -> ValidationReport:
    """Materialize a raw graph and run both checks; digest covers the raw input."""
    from .materialize import materialize

    if schema is None:
        schema = extract_schema(raw_graph)
    materialized = materialize(raw_graph, schema)
    violations = check_disjointness(materialized, schema) + check_obligations(materialized, schema, mode)
    return ValidationReport(
        tuple(sorted(violations, key=Violation.sort_key)),
        mode,
        inputs_digest(raw_graph),
    )
