"""Schema extraction: pull the axiom structure out of a graph.

The extractor reads subclass and subproperty assertions, property domains,
ranges and inverses, pairwise disjointness (grouped into maximal cliques),
existential obligations written as labeled-blank-node restrictions, and
class-level statements made about class IRIs themselves (punning).  The
result is a :class:`SchemaIndex`, the single axiom source consulted by the
materializer, the class-expression engine, and the validator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .graph import Graph
from .terms import (
    BUILTIN_NAMESPACES,
    OWL_CLASS,
    OWL_DATATYPE_PROPERTY,
    OWL_DISJOINT_WITH,
    OWL_INVERSE_OF,
    OWL_OBJECT_PROPERTY,
    OWL_ON_PROPERTY,
    OWL_RESTRICTION,
    OWL_SOME_VALUES_FROM,
    RDF_PROPERTY,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    PrefixMap,
    Term,
    Triple,
    iri,
)
from .vocab import DEFAULT_PREFIXES, NAME_ALIASES


class SchemaError(Exception):
    """The graph's schema-level statements are malformed or inconsistent."""


@dataclass(frozen=True)
class Obligation:
    """An existential requirement: instances of ``on_class`` need a
    ``property`` link to some instance of ``filler``."""

    on_class: str
    property: str
    filler: str

    def sort_key(self) -> tuple[str, str, str]:
        return (self.on_class, self.property, self.filler)


def _is_builtin(iri_value: str) -> bool:
    return iri_value.startswith(BUILTIN_NAMESPACES)


def _transitive_closure(pairs: frozenset[tuple[str, str]]) -> dict[str, frozenset[str]]:
    direct: dict[str, set[str]] = {}
    for child, parent in pairs:
        if child != parent:
            direct.setdefault(child, set()).add(parent)
    closure = {node: set(parents) for node, parents in direct.items()}
    changed = True
    while changed:
        changed = False
        for parents in closure.values():
            additions: set[str] = set()
            for parent in parents:
                additions |= closure.get(parent, frozenset())
            if not additions <= parents:
                parents |= additions
                changed = True
    return {node: frozenset(parents) for node, parents in closure.items()}


def _maximal_cliques(nodes: set[str], edges: set[frozenset[str]]) -> tuple[frozenset[str], ...]:
    """Bron-Kerbosch with pivoting over an undirected pairwise-edge graph."""
    adjacency: dict[str, set[str]] = {n: set() for n in nodes}
    for edge in edges:
        a, b = sorted(edge)
        adjacency[a].add(b)
        adjacency[b].add(a)
    cliques: list[frozenset[str]] = []

    def expand(candidate: set[str], allowed: set[str], excluded: set[str]) -> None:
        if not allowed and not excluded:
            if len(candidate) >= 2:
                cliques.append(frozenset(candidate))
            return
        pivot = max(allowed | excluded, key=lambda n: len(adjacency[n] & allowed))
        for node in sorted(allowed - adjacency[pivot]):
            expand(candidate | {node}, allowed & adjacency[node], excluded & adjacency[node])
            allowed = allowed - {node}
            excluded = excluded | {node}

    expand(set(), set(nodes), set())
    return tuple(sorted(cliques, key=sorted))


@dataclass(frozen=True)
class SchemaIndex:
    sub_class_of: frozenset[tuple[str, str]]
    sub_property_of: frozenset[tuple[str, str]]
    domain_of: dict[str, frozenset[str]]
    range_of: dict[str, frozenset[str]]
    inverse_of: frozenset[tuple[str, str]]
    disjoint_sets: tuple[frozenset[str], ...]
    obligations: tuple[Obligation, ...]
    class_level_triples: tuple[Triple, ...]
    classes: frozenset[str]
    properties: frozenset[str]

    def superclasses(self, cls: str) -> frozenset[str]:
        """Strict superclasses of ``cls`` under the transitive closure."""
        return self._superclass_closure().get(cls, frozenset())

    def is_subclass(self, sub: str, sup: str) -> bool:
        """Reflexive-transitive subclass test."""
        return sub == sup or sup in self.superclasses(sub)

    def superproperties(self, prop: str) -> frozenset[str]:
        return self._superproperty_closure().get(prop, frozenset())

    def is_subproperty(self, sub: str, sup: str) -> bool:
        return sub == sup or sup in self.superproperties(sub)

    def inverse_partners(self, prop: str) -> frozenset[str]:
        return self._inverse_map().get(prop, frozenset())

    def inherited_obligations(self, cls: str) -> tuple[Obligation, ...]:
        """Obligations asserted on ``cls`` or any of its superclasses."""
        lineage = {cls} | set(self.superclasses(cls))
        return tuple(ob for ob in self.obligations if ob.on_class in lineage)

    def _superclass_closure(self) -> dict[str, frozenset[str]]:
        return _cached_closure(self.sub_class_of)

    def _superproperty_closure(self) -> dict[str, frozenset[str]]:
        return _cached_closure(self.sub_property_of)

    def _inverse_map(self) -> dict[str, frozenset[str]]:
        return _cached_inverse_map(self.inverse_of)


@lru_cache(maxsize=64)
def _cached_closure(pairs: frozenset[tuple[str, str]]) -> dict[str, frozenset[str]]:
    return _transitive_closure(pairs)


@lru_cache(maxsize=64)
def _cached_inverse_map(pairs: frozenset[tuple[str, str]]) -> dict[str, frozenset[str]]:
    partners: dict[str, set[str]] = {}
    for a, b in pairs:
        partners.setdefault(a, set()).add(b)
        partners.setdefault(b, set()).add(a)
    return {p: frozenset(s) for p, s in partners.items()}


def _detect_subclass_cycle(pairs: frozenset[tuple[str, str]]) -> list[str] | None:
    direct: dict[str, set[str]] = {}
    for child, parent in pairs:
        if child != parent:  # a reflexive assertion is tolerated, not a cycle
            direct.setdefault(child, set()).add(parent)
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(node: str, trail: list[str]) -> list[str] | None:
        state[node] = 1
        trail.append(node)
        for parent in sorted(direct.get(node, ())):
            if state.get(parent) == 1:
                return trail[trail.index(parent):] + [parent]
            if state.get(parent, 0) == 0:
                cycle = visit(parent, trail)
                if cycle:
                    return cycle
        trail.pop()
        state[node] = 2
        return None

    for node in sorted(direct):
        if state.get(node, 0) == 0:
            cycle = visit(node, [])
            if cycle:
                return cycle
    return None


def extract_schema(graph: Graph) -> SchemaIndex:
    """Build a SchemaIndex from a graph's schema-level triples.

    The result depends only on the set of triples, never their order.
    Subclass cycles (other than reflexive assertions) and malformed
    restriction nodes raise :class:`SchemaError`.
    """
    type_iri = iri(RDF_TYPE)

    classes: set[str] = set()
    properties: set[str] = set()

    for t in graph.match(None, type_iri, None):
        if not t.o.is_iri():
            continue
        if t.o.value == OWL_CLASS and t.s.is_iri():
            classes.add(t.s.value)
        elif t.o.value in (OWL_OBJECT_PROPERTY, OWL_DATATYPE_PROPERTY, RDF_PROPERTY) and t.s.is_iri():
            properties.add(t.s.value)
        elif not _is_builtin(t.o.value):
            classes.add(t.o.value)

    restriction_nodes = {
        t.s for t in graph.match(None, type_iri, iri(OWL_RESTRICTION)) if t.s.is_blank()
    }

    sub_class_pairs: set[tuple[str, str]] = set()
    restriction_supers: dict[Term, list[str]] = {}
    for t in graph.match(None, iri(RDFS_SUBCLASSOF), None):
        if t.s.is_iri() and t.o.is_iri():
            sub_class_pairs.add((t.s.value, t.o.value))
            classes.add(t.s.value)
            classes.add(t.o.value)
        elif t.s.is_iri() and t.o.is_blank():
            if t.o not in restriction_nodes:
                raise SchemaError(
                    f"blank node _:{t.o.value} is used as a superclass but is not typed owl:Restriction"
                )
            restriction_supers.setdefault(t.o, []).append(t.s.value)
            classes.add(t.s.value)

    sub_property_pairs: set[tuple[str, str]] = set()
    for t in graph.match(None, iri(RDFS_SUBPROPERTYOF), None):
        if t.s.is_iri() and t.o.is_iri():
            sub_property_pairs.add((t.s.value, t.o.value))
            properties.add(t.s.value)
            properties.add(t.o.value)

    domain_of: dict[str, set[str]] = {}
    for t in graph.match(None, iri(RDFS_DOMAIN), None):
        if t.s.is_iri() and t.o.is_iri():
            domain_of.setdefault(t.s.value, set()).add(t.o.value)
            properties.add(t.s.value)
            classes.add(t.o.value)

    range_of: dict[str, set[str]] = {}
    for t in graph.match(None, iri(RDFS_RANGE), None):
        if t.s.is_iri() and t.o.is_iri():
            if _is_builtin(t.o.value):
                continue  # datatype ranges carry no instance typing
            range_of.setdefault(t.s.value, set()).add(t.o.value)
            properties.add(t.s.value)
            classes.add(t.o.value)

    inverse_pairs: set[tuple[str, str]] = set()
    for t in graph.match(None, iri(OWL_INVERSE_OF), None):
        if t.s.is_iri() and t.o.is_iri():
            pair = tuple(sorted((t.s.value, t.o.value)))
            inverse_pairs.add((pair[0], pair[1]))
            properties.add(t.s.value)
            properties.add(t.o.value)

    disjoint_edges: set[frozenset[str]] = set()
    disjoint_nodes: set[str] = set()
    for t in graph.match(None, iri(OWL_DISJOINT_WITH), None):
        if t.s.is_iri() and t.o.is_iri() and t.s.value != t.o.value:
            disjoint_edges.add(frozenset((t.s.value, t.o.value)))
            disjoint_nodes.update((t.s.value, t.o.value))
            classes.add(t.s.value)
            classes.add(t.o.value)

    obligations: list[Obligation] = []
    for node in sorted(restriction_nodes, key=Term.sort_key):
        on_property = [t.o for t in graph.match(node, iri(OWL_ON_PROPERTY), None) if t.o.is_iri()]
        fillers = [t.o for t in graph.match(node, iri(OWL_SOME_VALUES_FROM), None) if t.o.is_iri()]
        if len(on_property) != 1 or len(fillers) != 1:
            raise SchemaError(
                f"restriction _:{node.value} needs exactly one owl:onProperty and one owl:someValuesFrom"
            )
        properties.add(on_property[0].value)
        classes.add(fillers[0].value)
        for on_class in restriction_supers.get(node, ()):
            obligations.append(Obligation(on_class, on_property[0].value, fillers[0].value))

    classes = {c for c in classes if not _is_builtin(c)}
    properties = {p for p in properties if not _is_builtin(p)}

    cycle = _detect_subclass_cycle(frozenset(sub_class_pairs))
    if cycle:
        raise SchemaError("subclass cycle detected: " + " < ".join(cycle))

    class_terms = {iri(c) for c in classes}
    class_level: list[Triple] = []
    for t in graph:
        if t.s in class_terms and not _is_builtin(t.p.value):
            class_level.append(t)

    for ob in obligations:
        if ob.property not in properties:
            raise SchemaError(f"obligation on {ob.on_class} names undeclared property {ob.property}")
        if ob.filler not in classes:
            raise SchemaError(f"obligation on {ob.on_class} names undeclared class {ob.filler}")

    return SchemaIndex(
        sub_class_of=frozenset(sub_class_pairs),
        sub_property_of=frozenset(sub_property_pairs),
        domain_of={p: frozenset(cs) for p, cs in sorted(domain_of.items())},
        range_of={p: frozenset(cs) for p, cs in sorted(range_of.items())},
        inverse_of=frozenset(inverse_pairs),
        disjoint_sets=_maximal_cliques(disjoint_nodes, disjoint_edges),
        obligations=tuple(sorted(obligations, key=Obligation.sort_key)),
        class_level_triples=tuple(sorted(class_level, key=Triple.sort_key)),
        classes=frozenset(classes),
        properties=frozenset(properties),
    )


def local_name(iri_value: str) -> str:
    """The part of an IRI after the last '#' or '/'."""
    for sep in ("#", "/"):
        if sep in iri_value:
            idx = iri_value.rfind(sep)
            if idx + 1 < len(iri_value):
                return iri_value[idx + 1:]
    return iri_value


class NameCatalog:
    """Resolve bare, aliased, prefixed, or bracketed names to IRIs.

    Bare names are matched against the local names of every class, property,
    and typed individual in a graph.  Ambiguous bare names resolve to an
    error listing the candidates rather than guessing.
    """

    def __init__(
        self,
        classes: dict[str, set[str]],
        properties: dict[str, set[str]],
        individuals: dict[str, set[str]],
        prefixes: PrefixMap | None = None,
        aliases: dict[str, str] | None = None,
    ) -> None:
        self._by_category = {"class": classes, "property": properties, "individual": individuals}
        self._prefixes = prefixes if prefixes is not None else DEFAULT_PREFIXES
        self._aliases = dict(NAME_ALIASES if aliases is None else aliases)

    @classmethod
    def from_graph(cls, graph: Graph, schema: SchemaIndex | None = None,
                   prefixes: PrefixMap | None = None) -> "NameCatalog":
        if schema is None:
            schema = extract_schema(graph)
        classes: dict[str, set[str]] = {}
        properties: dict[str, set[str]] = {}
        individuals: dict[str, set[str]] = {}
        for c in schema.classes:
            classes.setdefault(local_name(c), set()).add(c)
        for p in schema.properties:
            properties.setdefault(local_name(p), set()).add(p)
        class_iris = {iri(c) for c in schema.classes}
        for t in graph.match(None, iri(RDF_TYPE), None):
            if t.s.is_iri() and t.s not in class_iris and t.o.is_iri() and not _is_builtin(t.o.value):
                individuals.setdefault(local_name(t.s.value), set()).add(t.s.value)
        return cls(classes, properties, individuals, prefixes)

    def ambiguous_names(self) -> dict[str, set[str]]:
        """Bare names that map to more than one IRI within a category."""
        out: dict[str, set[str]] = {}
        for table in self._by_category.values():
            for name, iris in table.items():
                if len(iris) > 1:
                    out.setdefault(name, set()).update(iris)
        return out

    def resolve(self, name: str, category: str) -> str:
        """Resolve a name as written in a query or rule to an IRI.

        Accepts ``<absolute-iri>``, ``prefix:local``, a bare local name, or
        a registered alias of one.  Raises KeyError with a readable message.
        """
        if category not in self._by_category:
            raise ValueError(f"unknown name category: {category!r}")
        if name.startswith("<") and name.endswith(">"):
            return name[1:-1]
        if ":" in name:
            prefix, _, local = name.partition(":")
            expanded = self._prefixes.expand(prefix, local)
            if expanded is None:
                raise KeyError(f"undeclared prefix '{prefix}:' in name {name!r}")
            return expanded
        bare = self._aliases.get(name, name)
        table = self._by_category[category]
        candidates = table.get(bare, set())
        if not candidates:
            raise KeyError(f"unknown {category} name {bare!r}")
        if len(candidates) > 1:
            listed = ", ".join(sorted(candidates))
            raise KeyError(f"{category} name {bare!r} is ambiguous between: {listed}")
        return next(iter(candidates))
