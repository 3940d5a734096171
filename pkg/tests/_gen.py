"""Seeded random generators for the oracle-equivalence suites.

Everything is driven by a caller-provided random.Random so runs are
reproducible from a single integer seed.  Generated schema triples keep
subclass and subproperty edges acyclic by construction (edges only point
from a higher index to a lower one).
"""

from __future__ import annotations

import random

from applekit.graph import Graph
from applekit.query import (
    ANYTHING,
    And,
    Named,
    OneOf,
    PropertyPath,
    SelectQuery,
    Some,
    TriplePattern,
)
from applekit.rules import ANY, CONST, VAR, Atom, Rule, RuleArg, assign_strata
from applekit.terms import (
    OWL_CLASS,
    OWL_DISJOINT_WITH,
    OWL_INVERSE_OF,
    OWL_OBJECT_PROPERTY,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    Triple,
    blank,
    iri,
    literal,
)

NS = "http://test.example/gen#"


def random_graph(
    rng: random.Random,
    max_triples: int = 60,
    max_classes: int = 8,
    max_properties: int = 6,
    max_individuals: int = 12,
) -> Graph:
    """A random graph mixing schema and instance triples, <= max_triples."""
    n_classes = rng.randint(2, max_classes)
    n_props = rng.randint(1, max_properties)
    n_inds = rng.randint(2, max_individuals)
    classes = [iri(f"{NS}C{i}") for i in range(n_classes)]
    props = [iri(f"{NS}p{i}") for i in range(n_props)]
    individuals = [iri(f"{NS}i{i}") for i in range(n_inds)]
    if rng.random() < 0.3:
        individuals.append(blank(f"b{rng.randint(0, 2)}"))

    graph = Graph()
    rdf_type = iri(RDF_TYPE)

    # Declarations (cheap, and they anchor schema extraction).
    for cls in classes:
        graph.insert(Triple(cls, rdf_type, iri(OWL_CLASS)))
    for prop in props:
        graph.insert(Triple(prop, rdf_type, iri(OWL_OBJECT_PROPERTY)))

    # Acyclic subclass / subproperty edges: child index > parent index.
    for i in range(1, n_classes):
        if rng.random() < 0.55:
            graph.insert(Triple(classes[i], iri(RDFS_SUBCLASSOF), classes[rng.randrange(i)]))
    for i in range(1, n_props):
        if rng.random() < 0.4:
            graph.insert(Triple(props[i], iri(RDFS_SUBPROPERTYOF), props[rng.randrange(i)]))

    for prop in props:
        if rng.random() < 0.4:
            graph.insert(Triple(prop, iri(RDFS_DOMAIN), rng.choice(classes)))
        if rng.random() < 0.4:
            graph.insert(Triple(prop, iri(RDFS_RANGE), rng.choice(classes)))
    if n_props >= 2 and rng.random() < 0.5:
        a, b = rng.sample(range(n_props), 2)
        graph.insert(Triple(props[a], iri(OWL_INVERSE_OF), props[b]))
    if rng.random() < 0.4:
        a, b = rng.sample(range(n_classes), 2) if n_classes >= 2 else (0, 0)
        if a != b:
            graph.insert(Triple(classes[a], iri(OWL_DISJOINT_WITH), classes[b]))

    budget = max_triples - len(graph)
    for _ in range(max(0, rng.randint(budget // 2, budget))):
        roll = rng.random()
        if roll < 0.45:
            graph.insert(Triple(rng.choice(individuals), rdf_type, rng.choice(classes)))
        elif roll < 0.9:
            graph.insert(
                Triple(rng.choice(individuals), rng.choice(props), rng.choice(individuals))
            )
        else:
            graph.insert(
                Triple(rng.choice(individuals), rng.choice(props), literal(f"v{rng.randint(0, 9)}"))
            )
    return graph


def graph_vocabulary(graph: Graph) -> tuple[list[str], list[str], list[str]]:
    """(classes, properties, individuals) IRIs seen in a generated graph."""
    classes = sorted({t.s.value for t in graph.match(None, iri(RDF_TYPE), iri(OWL_CLASS))})
    props = sorted({t.s.value for t in graph.match(None, iri(RDF_TYPE), iri(OWL_OBJECT_PROPERTY))})
    individuals = sorted(
        {
            t.s.value
            for t in graph.match(None, iri(RDF_TYPE), None)
            if t.s.is_iri() and t.o.is_iri() and t.o.value.startswith(NS)
        }
    )
    return classes, props, individuals


def random_expression(rng: random.Random, classes: list[str], props: list[str], individuals: list[str], depth: int = 2):
    """A random class expression over the given vocabulary."""
    choices = ["named", "oneof", "anything"]
    if depth > 0:
        choices += ["some", "some", "and"]
    kind = rng.choice(choices)
    if kind == "named" and classes:
        return Named(rng.choice(classes))
    if kind == "oneof" and individuals:
        count = min(len(individuals), rng.randint(1, 2))
        return OneOf(frozenset(rng.sample(individuals, count)))
    if kind == "some" and props:
        filler = ANYTHING if rng.random() < 0.3 else random_expression(rng, classes, props, individuals, depth - 1)
        return Some(PropertyPath(rng.choice(props), inverted=rng.random() < 0.4), filler)
    if kind == "and" and depth > 0:
        parts = tuple(random_expression(rng, classes, props, individuals, depth - 1) for _ in range(rng.randint(2, 3)))
        return And(parts)
    return ANYTHING


def random_select(rng: random.Random, props: list[str], individuals: list[str]) -> SelectQuery:
    """A connected conjunctive query: patterns chain through a shared variable."""
    n_patterns = rng.randint(1, 3)
    patterns: list[TriplePattern] = []
    current = "?v0"
    fresh = 1
    for _ in range(n_patterns):
        predicate = iri(rng.choice(props))
        if individuals and rng.random() < 0.3:
            patterns.append(TriplePattern(current, predicate, iri(rng.choice(individuals))))
        else:
            nxt = f"?v{fresh}"
            fresh += 1
            patterns.append(TriplePattern(current, predicate, nxt))
            current = nxt if rng.random() < 0.7 else current
    order: list[str] = []
    for pattern in patterns:
        for var in pattern.variables():
            if var not in order:
                order.append(var)
    return SelectQuery(tuple(patterns), tuple(order))


def random_rules(rng: random.Random, classes: list[str], props: list[str], individuals: list[str]) -> list[Rule]:
    """1-3 stratified rules, safe by construction.

    Head predicates are fresh (H0, H1, ...) so rules can chain on and negate
    one another; negation only ever looks at lower-numbered heads or at
    vocabulary predicates, keeping the set stratifiable.
    """
    n_rules = rng.randint(1, 3)
    heads = [f"{NS}H{i}" for i in range(n_rules)]
    rules: list[Rule] = []
    for k in range(n_rules):
        var_x = RuleArg(VAR, "x")
        var_y = RuleArg(VAR, "y")
        body: list[Atom] = []
        # One guaranteed positive binder for ?x.
        if props and rng.random() < 0.6:
            body.append(Atom(rng.choice(props), (var_x, var_y)))
            binder_has_y = True
        elif classes:
            body.append(Atom(rng.choice(classes), (var_x,)))
            binder_has_y = False
        else:
            body.append(Atom(heads[0], (var_x,)))
            binder_has_y = False
        # Optional extra positive atom, possibly chaining on an earlier head.
        if rng.random() < 0.5:
            if k > 0 and rng.random() < 0.4:
                body.append(Atom(rng.choice(heads[:k]), (var_x,)))
            elif classes:
                body.append(Atom(rng.choice(classes), (var_x,)))
        # Optional constant or wildcard atom.
        if props and individuals and rng.random() < 0.4:
            body.append(Atom(rng.choice(props), (var_x, RuleArg(CONST, rng.choice(individuals)))))
        if props and rng.random() < 0.3:
            body.append(Atom(rng.choice(props), (var_x, RuleArg(ANY)), negated=True))
        # Optional stratified negation on an earlier head.
        if k > 0 and rng.random() < 0.5:
            body.append(Atom(rng.choice(heads[:k]), (var_x,), negated=True))
        # Heads alternate between class atoms and property atoms.
        if binder_has_y and rng.random() < 0.3:
            head = Atom(heads[k], (var_x, var_y))
        else:
            head = Atom(heads[k], (var_x,))
        rules.append(Rule(f"G{k}", tuple(body), head))
    return assign_strata(rules)
