"""Forward-chaining materialization of schema entailments.

Six named entailment rules, individually switchable through an
:class:`EntailmentRegime`:

- ``subclass-transitivity``: the transitive closure of asserted subclass
  pairs, written back as subClassOf triples (reflexive pairs suppressed).
- ``type-inheritance``: an instance of a class is an instance of every
  ancestor class.
- ``subproperty-propagation``: an edge over a property also holds over
  every ancestor property.
- ``domain-typing``: the subject of a property edge gains the property's
  domain classes.
- ``range-typing``: the object of a property edge gains the property's
  range classes (skipped for literal objects).
- ``inverse-propagation``: an edge over a property yields the reversed
  edge over each declared inverse.

Axioms are read from a :class:`~applekit.schema.SchemaIndex`, not from the
data graph, so materializing a data-only graph against a separately
extracted schema works.  Existential obligations are never skolemized; the
closed-world validator audits them instead.

The default strategy is semi-naive (a worklist seeded with the input
triples; each consequence is derived once).  A naive strategy, which
re-applies every single-step rule to a snapshot until nothing changes, is
retained as an independently-written oracle for equivalence testing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import Graph
from .schema import SchemaIndex
from .terms import RDF_TYPE, RDFS_SUBCLASSOF, Triple, iri

SUBCLASS_TRANSITIVITY = "subclass-transitivity"
TYPE_INHERITANCE = "type-inheritance"
SUBPROPERTY_PROPAGATION = "subproperty-propagation"
DOMAIN_TYPING = "domain-typing"
RANGE_TYPING = "range-typing"
INVERSE_PROPAGATION = "inverse-propagation"

ALL_ENTAILMENT_RULES = frozenset(
    {
        SUBCLASS_TRANSITIVITY,
        TYPE_INHERITANCE,
        SUBPROPERTY_PROPAGATION,
        DOMAIN_TYPING,
        RANGE_TYPING,
        INVERSE_PROPAGATION,
    }
)


@dataclass(frozen=True)
class EntailmentRegime:
    """The set of entailment rules a materialization run applies."""

    enabled: frozenset[str] = field(default_factory=lambda: ALL_ENTAILMENT_RULES)

    def __post_init__(self) -> None:
        unknown = set(self.enabled) - ALL_ENTAILMENT_RULES
        if unknown:
            raise ValueError(f"unknown entailment rule(s): {', '.join(sorted(unknown))}")

    def __contains__(self, rule: str) -> bool:
        return rule in self.enabled

    @classmethod
    def only(cls, *rules: str) -> "EntailmentRegime":
        return cls(frozenset(rules))


DEFAULT_REGIME = EntailmentRegime()

_TYPE = iri(RDF_TYPE)
_SUBCLASS = iri(RDFS_SUBCLASSOF)


def materialize(
    graph: Graph,
    schema: SchemaIndex,
    regime: EntailmentRegime = DEFAULT_REGIME,
    strategy: str = "semi-naive",
) -> Graph:
    """Return a new graph extended with every enabled entailment.

    The input graph is never mutated.  Both strategies reach the same
    fixpoint; "naive" exists as a test oracle and is markedly slower.
    """
    if strategy == "semi-naive":
        return _materialize_semi_naive(graph, schema, regime)
    if strategy == "naive":
        return _materialize_naive(graph, schema, regime)
    raise ValueError(f"unknown materialization strategy: {strategy!r}")


def entails(graph: Graph, triple: Triple, schema: SchemaIndex, regime: EntailmentRegime = DEFAULT_REGIME) -> bool:
    """True when the triple is asserted or derivable under the regime."""
    if triple in graph:
        return True
    return triple in materialize(graph, schema, regime)


def _materialize_semi_naive(graph: Graph, schema: SchemaIndex, regime: EntailmentRegime) -> Graph:
    out = graph.copy()

    subclass_up = {c: schema.superclasses(c) for c in schema.classes}
    superprops = {p: schema.superproperties(p) for p in schema.properties}
    inverses = {p: schema.inverse_partners(p) for p in schema.properties}

    pending: deque[Triple] = deque(out)

    if SUBCLASS_TRANSITIVITY in regime:
        # The closure of the asserted pairs, including pairs the data graph
        # itself may not carry when the schema came from a larger graph.
        for child, parents in sorted(subclass_up.items()):
            child_term = iri(child)
            for parent in sorted(parents):
                if parent != child:
                    derived = Triple(child_term, _SUBCLASS, iri(parent))
                    if out.insert(derived):
                        pending.append(derived)

    use_subclass = SUBCLASS_TRANSITIVITY in regime
    use_types = TYPE_INHERITANCE in regime
    use_subprops = SUBPROPERTY_PROPAGATION in regime
    use_domain = DOMAIN_TYPING in regime
    use_range = RANGE_TYPING in regime
    use_inverse = INVERSE_PROPAGATION in regime

    while pending:
        triple = pending.popleft()
        predicate = triple.p.value
        derived: list[Triple] = []
        if predicate == RDFS_SUBCLASSOF and use_subclass and triple.s.is_iri() and triple.o.is_iri():
            # A subclass edge asserted in the data graph chains through the
            # schema's closure even when the schema lacks that edge itself.
            for ancestor in subclass_up.get(triple.o.value, ()):
                if ancestor != triple.s.value:
                    derived.append(Triple(triple.s, _SUBCLASS, iri(ancestor)))
        if predicate == RDF_TYPE and use_types and triple.o.is_iri():
            for ancestor in subclass_up.get(triple.o.value, ()):
                if ancestor != triple.o.value:
                    derived.append(Triple(triple.s, _TYPE, iri(ancestor)))
        if predicate in superprops and use_subprops:
            for parent in superprops[predicate]:
                if parent != predicate:
                    derived.append(Triple(triple.s, iri(parent), triple.o))
        if use_domain:
            for cls in schema.domain_of.get(predicate, ()):
                derived.append(Triple(triple.s, _TYPE, iri(cls)))
        if use_range and not triple.o.is_literal():
            for cls in schema.range_of.get(predicate, ()):
                derived.append(Triple(triple.o, _TYPE, iri(cls)))
        if use_inverse and not triple.o.is_literal():
            for partner in inverses.get(predicate, ()):
                derived.append(Triple(triple.o, iri(partner), triple.s))
        for new_triple in derived:
            if out.insert(new_triple):
                pending.append(new_triple)
    return out


def _materialize_naive(graph: Graph, schema: SchemaIndex, regime: EntailmentRegime) -> Graph:
    out = graph.copy()

    if SUBCLASS_TRANSITIVITY in regime:
        for child, parent in schema.sub_class_of:
            if child != parent:
                out.insert(Triple(iri(child), _SUBCLASS, iri(parent)))

    asserted_subclass = {(c, d) for c, d in schema.sub_class_of if c != d}
    asserted_subprop = {(p, q) for p, q in schema.sub_property_of if p != q}
    inverse_pairs = set(schema.inverse_of)

    while True:
        additions: list[Triple] = []
        for triple in out:
            predicate = triple.p.value
            if predicate == RDFS_SUBCLASSOF and SUBCLASS_TRANSITIVITY in regime:
                if triple.s.is_iri() and triple.o.is_iri():
                    for child, parent in asserted_subclass:
                        if child == triple.o.value and parent != triple.s.value:
                            additions.append(Triple(triple.s, _SUBCLASS, iri(parent)))
            if predicate == RDF_TYPE and TYPE_INHERITANCE in regime and triple.o.is_iri():
                for child, parent in asserted_subclass:
                    if child == triple.o.value:
                        additions.append(Triple(triple.s, _TYPE, iri(parent)))
            if SUBPROPERTY_PROPAGATION in regime:
                for child, parent in asserted_subprop:
                    if child == predicate:
                        additions.append(Triple(triple.s, iri(parent), triple.o))
            if DOMAIN_TYPING in regime:
                for cls in schema.domain_of.get(predicate, ()):
                    additions.append(Triple(triple.s, _TYPE, iri(cls)))
            if RANGE_TYPING in regime and not triple.o.is_literal():
                for cls in schema.range_of.get(predicate, ()):
                    additions.append(Triple(triple.o, _TYPE, iri(cls)))
            if INVERSE_PROPAGATION in regime and not triple.o.is_literal():
                for a, b in inverse_pairs:
                    if predicate == a:
                        additions.append(Triple(triple.o, iri(b), triple.s))
                    if predicate == b:
                        additions.append(Triple(triple.o, iri(a), triple.s))
        changed = False
        for new_triple in additions:
            changed = out.insert(new_triple) or changed
        if not changed:
            return out
