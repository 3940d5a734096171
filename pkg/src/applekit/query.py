"""Class-expression queries and conjunctive select over the triple store.

The expression language is a compact Manchester-like grammar::

    expression := conjunct ('and' conjunct)*
    conjunct   := primary | restriction
    restriction:= path 'some' [primary]          (bare 'some' means any filler)
    path       := ['inverse'] property-name
    primary    := class-name | '{' name (',' name)* '}' | '(' expression ')'

Names resolve through a :class:`~applekit.schema.NameCatalog` (bare names,
registered aliases, prefixed names, or ``<iri>``).

Two retrieval modes share the AST.  Instance retrieval is extensional and
closed-world over a materialized graph: a restriction is satisfied by the
edges actually present.  Class retrieval is structural: a class satisfies a
restriction when it inherits a matching existential obligation or a
matching class-level (punned) edge.

``select`` evaluates a conjunctive basic-graph-pattern query and returns
sorted, duplicate-free rows; its patterns must share variables so the query
forms one connected component.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph
from .schema import NameCatalog, SchemaIndex
from .terms import RDF_TYPE, Term, Triple, iri

_TYPE = iri(RDF_TYPE)


class QueryParseError(Exception):
    """The query text cannot be parsed or references unknown names."""

    def __init__(self, message: str, position: int | None = None) -> None:
        suffix = f" (at offset {position})" if position is not None else ""
        super().__init__(message + suffix)
        self.position = position


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class PropertyPath:
    iri: str
    inverted: bool = False


@dataclass(frozen=True)
class Named:
    iri: str


@dataclass(frozen=True)
class OneOf:
    iris: frozenset[str]


@dataclass(frozen=True)
class Anything:
    pass


ANYTHING = Anything()


@dataclass(frozen=True)
class Some:
    path: PropertyPath
    filler: "ClassExpression" = ANYTHING


@dataclass(frozen=True)
class And:
    parts: tuple["ClassExpression", ...]

    def __post_init__(self) -> None:
        if len(self.parts) < 2:
            raise ValueError("And requires at least two conjuncts")


ClassExpression = Named | OneOf | Anything | Some | And


# ---------------------------------------------------------------------------
# Expression parsing


_PUNCT = {"(", ")", "{", "}", ","}


def _tokenize_expression(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append((ch, i))
            i += 1
            continue
        if ch == "<":
            end = text.find(">", i)
            if end == -1:
                raise QueryParseError("unterminated '<' in expression", i)
            tokens.append((text[i : end + 1], i))
            i = end + 1
            continue
        if ch.isalnum() or ch in "_?:":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_:.-?"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
            continue
        raise QueryParseError(f"unexpected character {ch!r} in expression", i)
    return tokens


class _ExpressionParser:
    def __init__(self, text: str, catalog: NameCatalog) -> None:
        self.tokens = _tokenize_expression(text)
        self.catalog = catalog
        self.index = 0

    def peek(self) -> str | None:
        return self.tokens[self.index][0] if self.index < len(self.tokens) else None

    def position(self) -> int | None:
        return self.tokens[self.index][1] if self.index < len(self.tokens) else None

    def next(self) -> str:
        token = self.peek()
        if token is None:
            raise QueryParseError("unexpected end of expression")
        self.index += 1
        return token

    def expect(self, token: str) -> None:
        found = self.next()
        if found != token:
            raise QueryParseError(f"expected {token!r}, found {found!r}", self.position())

    def resolve(self, name: str, *categories: str) -> str:
        error: KeyError | None = None
        for category in categories:
            try:
                return self.catalog.resolve(name, category)
            except KeyError as exc:
                error = exc
        raise QueryParseError(str(error.args[0]) if error and error.args else str(error)) from None

    def parse(self) -> ClassExpression:
        expr = self.parse_expression()
        if self.peek() is not None:
            raise QueryParseError(f"unexpected trailing token {self.peek()!r}", self.position())
        return expr

    def parse_expression(self) -> ClassExpression:
        parts = [self.parse_conjunct()]
        while self.peek() == "and":
            self.next()
            parts.append(self.parse_conjunct())
        if len(parts) == 1:
            return parts[0]
        return And(tuple(parts))

    def parse_conjunct(self) -> ClassExpression:
        token = self.peek()
        if token is None:
            raise QueryParseError("expected a class expression")
        if token == "(":
            self.next()
            inner = self.parse_expression()
            self.expect(")")
            # A parenthesized primary may itself be the path of a 'some'
            # only via the restriction form below, so just return it.
            return inner
        if token == "{":
            return self.parse_nominals()
        if token == "inverse":
            return self.parse_restriction()
        # A bare name is a restriction when followed by 'some', else a class.
        if self.lookahead_is_restriction():
            return self.parse_restriction()
        name = self.next()
        return Named(self.resolve(name, "class"))

    def lookahead_is_restriction(self) -> bool:
        nxt = self.index + 1
        return nxt < len(self.tokens) and self.tokens[nxt][0] == "some"

    def parse_restriction(self) -> Some:
        inverted = False
        if self.peek() == "inverse":
            self.next()
            inverted = True
        name = self.next()
        if name in _PUNCT or name in ("and", "some", "inverse"):
            raise QueryParseError(f"expected a property name, found {name!r}", self.position())
        prop = self.resolve(name, "property")
        self.expect("some")
        filler: ClassExpression = ANYTHING
        token = self.peek()
        if token is not None and token not in (")", "and", ","):
            filler = self.parse_filler()
        return Some(PropertyPath(prop, inverted), filler)

    def parse_filler(self) -> ClassExpression:
        token = self.peek()
        if token == "(":
            self.next()
            inner = self.parse_expression()
            self.expect(")")
            return inner
        if token == "{":
            return self.parse_nominals()
        name = self.next()
        if name in ("and", "some", "inverse") or name in _PUNCT:
            raise QueryParseError(f"expected a filler, found {name!r}", self.position())
        return Named(self.resolve(name, "class"))

    def parse_nominals(self) -> OneOf:
        self.expect("{")
        names = [self.next()]
        while self.peek() == ",":
            self.next()
            names.append(self.next())
        self.expect("}")
        # Punned class IRIs may appear as nominal members, so fall back to
        # the class table exactly as select objects and rule constants do.
        iris = frozenset(self.resolve(name, "individual", "class") for name in names)
        return OneOf(iris)


def parse_class_expression(text: str, catalog: NameCatalog | None = None) -> ClassExpression:
    """Parse a class expression; bare names resolve through the catalog
    (defaulting to the bundled assets' catalog)."""
    if catalog is None:
        from .assets import default_catalog

        catalog = default_catalog()
    if not text.strip():
        raise QueryParseError("empty class expression")
    return _ExpressionParser(text, catalog).parse()


# ---------------------------------------------------------------------------
# Instance retrieval (extensional, closed world)


def _extension(expr: ClassExpression, graph: Graph) -> set[Term]:
    if isinstance(expr, Named):
        return {t.s for t in graph.match(None, _TYPE, iri(expr.iri))}
    if isinstance(expr, OneOf):
        # Nominals denote their members whether or not the graph mentions them.
        return {iri(value) for value in expr.iris}
    if isinstance(expr, Anything):
        return set(graph.nodes())
    if isinstance(expr, And):
        parts = [_extension(part, graph) for part in expr.parts]
        common = parts[0]
        for part in parts[1:]:
            common &= part
        return common
    if isinstance(expr, Some):
        prop = iri(expr.path.iri)
        edges = graph.match(None, prop, None)
        if expr.path.inverted:
            pairs = [(t.o, t.s) for t in edges if not t.o.is_literal()]
        else:
            pairs = [(t.s, t.o) for t in edges]
        if isinstance(expr.filler, Anything):
            return {x for x, _ in pairs}
        targets = _extension(expr.filler, graph)
        return {x for x, y in pairs if y in targets}
    raise TypeError(f"unknown expression node: {type(expr).__name__}")


def retrieve_instances(expr: ClassExpression, graph: Graph) -> list[str]:
    """Individuals satisfying the expression, as sorted IRI/blank strings."""
    found = _extension(expr, graph)
    return sorted(term.value if term.is_iri() else f"_:{term.value}" for term in found)


# ---------------------------------------------------------------------------
# Class retrieval (structural subsumption)


def _filler_accepts_class(filler: ClassExpression, candidate: str, schema: SchemaIndex, graph: Graph) -> bool:
    """Does an obligation filler class satisfy the query filler, structurally?"""
    if isinstance(filler, Anything):
        return True
    if isinstance(filler, Named):
        return schema.is_subclass(candidate, filler.iri)
    if isinstance(filler, OneOf):
        return candidate in filler.iris
    if isinstance(filler, And):
        return all(_filler_accepts_class(part, candidate, schema, graph) for part in filler.parts)
    if isinstance(filler, Some):
        return _class_satisfies(candidate, filler, schema, graph)
    return False


def _filler_accepts_object(filler: ClassExpression, obj: Term, schema: SchemaIndex, graph: Graph) -> bool:
    """Does the object of a class-level edge satisfy the query filler?"""
    if isinstance(filler, Anything):
        return True
    if obj.is_literal():
        return False
    if isinstance(filler, OneOf):
        return obj.is_iri() and obj.value in filler.iris
    if isinstance(filler, Named):
        if Triple(obj, _TYPE, iri(filler.iri)) in graph:
            return True
        return obj.is_iri() and obj.value in schema.classes and schema.is_subclass(obj.value, filler.iri)
    if isinstance(filler, And):
        return all(_filler_accepts_object(part, obj, schema, graph) for part in filler.parts)
    if isinstance(filler, Some):
        return obj in _extension(filler, graph)
    return False


def _class_satisfies(candidate: str, expr: ClassExpression, schema: SchemaIndex, graph: Graph) -> bool:
    if isinstance(expr, Named):
        return schema.is_subclass(candidate, expr.iri)
    if isinstance(expr, Anything):
        return True
    if isinstance(expr, OneOf):
        return candidate in expr.iris
    if isinstance(expr, And):
        return all(_class_satisfies(candidate, part, schema, graph) for part in expr.parts)
    if isinstance(expr, Some):
        lineage = {candidate} | set(schema.superclasses(candidate))
        if not expr.path.inverted:
            for obligation in schema.obligations:
                if obligation.on_class not in lineage:
                    continue
                if not schema.is_subproperty(obligation.property, expr.path.iri):
                    continue
                if _filler_accepts_class(expr.filler, obligation.filler, schema, graph):
                    return True
            for triple in schema.class_level_triples:
                if triple.s.value not in lineage:
                    continue
                if not schema.is_subproperty(triple.p.value, expr.path.iri):
                    continue
                if _filler_accepts_object(expr.filler, triple.o, schema, graph):
                    return True
            return False
        # Inverted paths read class-level edges pointing at the candidate.
        for triple in schema.class_level_triples:
            if not (triple.o.is_iri() and triple.o.value == candidate):
                continue
            if not schema.is_subproperty(triple.p.value, expr.path.iri):
                continue
            if _filler_accepts_object(expr.filler, triple.s, schema, graph):
                return True
        return False
    raise TypeError(f"unknown expression node: {type(expr).__name__}")


def retrieve_classes(expr: ClassExpression, schema: SchemaIndex, graph: Graph) -> list[str]:
    """Declared classes structurally subsumed by the expression, sorted."""
    return sorted(c for c in schema.classes if _class_satisfies(c, expr, schema, graph))


# ---------------------------------------------------------------------------
# Conjunctive select


@dataclass(frozen=True)
class TriplePattern:
    s: str | Term  # "?name" variables or concrete terms
    p: str | Term
    o: str | Term

    def variables(self) -> list[str]:
        return [slot for slot in (self.s, self.p, self.o) if isinstance(slot, str)]


@dataclass(frozen=True)
class SelectQuery:
    patterns: tuple[TriplePattern, ...]
    variables: tuple[str, ...]  # in first-appearance order


def parse_select(text: str, catalog: NameCatalog | None = None) -> SelectQuery:
    """Parse '?s p o . ?s p2 ?o2' style conjunctive patterns.

    Position determines the name category: subjects and objects resolve as
    individuals (falling back to classes, for punned IRIs), predicates as
    properties.  All patterns must share variables transitively.
    """
    if catalog is None:
        from .assets import default_catalog

        catalog = default_catalog()
    chunks = [chunk.strip() for chunk in text.split(".")]
    patterns: list[TriplePattern] = []
    order: list[str] = []
    for chunk in chunks:
        if not chunk:
            continue
        fields = chunk.split()
        if len(fields) != 3:
            raise QueryParseError(f"pattern must have exactly 3 terms, found {len(fields)}: {chunk!r}")
        slots: list[str | Term] = []
        for position, field in enumerate(fields):
            if field.startswith("?"):
                if len(field) < 2:
                    raise QueryParseError("'?' must be followed by a variable name")
                slots.append(field)
                if field not in order:
                    order.append(field)
                continue
            if position == 1:
                if field == "a":
                    slots.append(iri(RDF_TYPE))
                    continue
                categories = ("property",)
            else:
                categories = ("individual", "class")
            resolved: str | None = None
            last: Exception | None = None
            for category in categories:
                try:
                    resolved = catalog.resolve(field, category)
                    break
                except KeyError as exc:
                    last = exc
            if resolved is None:
                raise QueryParseError(str(last.args[0]) if last and last.args else f"unknown name {field!r}")
            slots.append(iri(resolved))
        patterns.append(TriplePattern(slots[0], slots[1], slots[2]))
    if not patterns:
        raise QueryParseError("select query has no patterns")
    _check_connected(patterns)
    return SelectQuery(tuple(patterns), tuple(order))


def _check_connected(patterns: list[TriplePattern]) -> None:
    with_vars = [p for p in patterns if p.variables()]
    if len(with_vars) <= 1:
        return
    groups: list[set[str]] = [set(p.variables()) for p in with_vars]
    merged = [groups[0]]
    for group in groups[1:]:
        hits = [m for m in merged if m & group]
        for hit in hits:
            group |= hit
            merged.remove(hit)
        merged.append(group)
    if len(merged) > 1:
        names = " / ".join(",".join(sorted(g)) for g in merged)
        raise QueryParseError(f"select patterns are not connected; variable groups: {names}")


def select(query: SelectQuery, graph: Graph) -> list[tuple[str, ...]]:
    """Evaluate a conjunctive query; rows are sorted and duplicate-free.

    An empty variable list yields one empty row when every ground pattern
    holds, and no rows otherwise.
    """

    def resolve_slot(slot: str | Term, binding: dict[str, Term]) -> Term | None:
        if isinstance(slot, Term):
            return slot
        return binding.get(slot)

    bindings: list[dict[str, Term]] = [{}]
    for pattern in query.patterns:
        next_bindings: list[dict[str, Term]] = []
        for binding in bindings:
            s = resolve_slot(pattern.s, binding)
            p = resolve_slot(pattern.p, binding)
            o = resolve_slot(pattern.o, binding)
            for triple in graph.match(s, p, o):
                extended = dict(binding)
                ok = True
                for slot, term in ((pattern.s, triple.s), (pattern.p, triple.p), (pattern.o, triple.o)):
                    if isinstance(slot, str):
                        bound = extended.get(slot)
                        if bound is None:
                            extended[slot] = term
                        elif bound != term:
                            ok = False
                            break
                if ok:
                    next_bindings.append(extended)
        bindings = next_bindings
        if not bindings:
            break
    rows = {
        tuple(_render(binding[var]) for var in query.variables)
        for binding in bindings
    }
    return sorted(rows)


def _render(term: Term) -> str:
    if term.is_iri():
        return term.value
    if term.is_blank():
        return f"_:{term.value}"
    return term.n3()
