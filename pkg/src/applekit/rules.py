"""Stratified datalog-style rules over the triple store, and the moral
verdict classifier built on them.

Rule files are line-oriented::

    # severity gates the wrong-action verdict
    R1: Action(?a), violatesEthicalPrinciple(?a, ?p) -> MorallyWrongAction(?a) .

Each rule is ``id: body-atoms -> head-atom .`` where an atom is either
``Class(?v)`` or ``property(?v, ?w)``; arguments may be variables (``?x``),
the anonymous wildcard ``_``, bare or prefixed names resolved through a
:class:`~applekit.schema.NameCatalog`, or ``<absolute-iris>``.  ``not``
before a body atom negates it (negation as failure).

Strata are computed, not declared: a rule deriving predicate ``h`` must sit
strictly above every rule whose derived predicate ``h`` negates, and at or
above those it uses positively.  Rules whose negations form a cycle are
rejected.  Evaluation runs strata in ascending order, semi-naive within a
stratum, and records a :class:`Firing` (rule id plus variable bindings) for
every distinct body match, so each derived triple can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph
from .terms import RDF_TYPE, Term, Triple, iri
from .vocab import ACTION, UPHOLDS_PRINCIPLE, VERDICT_CLASSES, VIOLATES_PRINCIPLE

_TYPE = iri(RDF_TYPE)


class RuleError(Exception):
    """A rule file is syntactically or semantically unusable."""


class VerdictConflictError(RuleError):
    """An action was derived into more than one verdict class."""

    def __init__(self, action: str, classes: tuple[str, ...]) -> None:
        super().__init__(f"action {action} received contradictory verdicts: {', '.join(classes)}")
        self.action = action
        self.classes = classes


@dataclass(frozen=True)
class RuleArg:
    kind: str  # "var" | "const" | "any"
    value: str | None = None  # variable name or constant IRI

    def __str__(self) -> str:
        if self.kind == "var":
            return f"?{self.value}"
        if self.kind == "any":
            return "_"
        return f"<{self.value}>"


VAR = "var"
CONST = "const"
ANY = "any"


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[RuleArg, ...]
    negated: bool = False

    def __post_init__(self) -> None:
        if len(self.args) not in (1, 2):
            raise RuleError(f"atom over {self.predicate} must have 1 or 2 arguments")

    def is_class_atom(self) -> bool:
        return len(self.args) == 1

    def key(self) -> tuple[str, str]:
        """Predicate identity used for dependency analysis."""
        return ("class" if self.is_class_atom() else "prop", self.predicate)

    def variables(self) -> set[str]:
        return {arg.value for arg in self.args if arg.kind == VAR and arg.value is not None}


@dataclass(frozen=True)
class Rule:
    id: str
    body: tuple[Atom, ...]
    head: Atom
    stratum: int = 0


@dataclass(frozen=True)
class Firing:
    """One successful body match: the rule, its bindings, and what it derived."""

    rule_id: str
    bindings: tuple[tuple[str, Term], ...]  # sorted by variable name
    derived: Triple


# ---------------------------------------------------------------------------
# Parsing


def _split_statements(text: str) -> list[tuple[int, str]]:
    """Split rule text into (line, statement) pairs on top-level dots."""
    statements: list[tuple[int, str]] = []
    current: list[str] = []
    start_line = 1
    line = 1
    in_iri = False
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
        if ch == "#" and not in_iri:
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch == "<":
            in_iri = True
        elif ch == ">":
            in_iri = False
        if ch == "." and not in_iri:
            statement = "".join(current).strip()
            if statement:
                statements.append((start_line, statement))
            current = []
            i += 1
            continue
        if not current:
            # Leading whitespace is never buffered, so start_line marks the
            # statement's first real character.
            if ch.isspace():
                i += 1
                continue
            start_line = line
        current.append(ch)
        i += 1
    leftover = "".join(current).strip()
    if leftover:
        raise RuleError(f"line {start_line}: rule is missing its terminating '.': {leftover[:60]!r}")
    return statements


_NAME_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-.")


def _tokenize_rule(text: str, line: int) -> list[str]:
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "<":
            end = text.find(">", i)
            if end == -1:
                raise RuleError(f"line {line}: unterminated '<' in rule")
            tokens.append(text[i : end + 1])
            i = end + 1
            continue
        if ch in "(),":
            tokens.append(ch)
            i += 1
            continue
        if ch == "-" and i + 1 < len(text) and text[i + 1] == ">":
            tokens.append("->")
            i += 2
            continue
        if ch == "?":
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i + 1:
                raise RuleError(f"line {line}: '?' must be followed by a variable name")
            tokens.append(text[i:j])
            i = j
            continue
        if ch in _NAME_CHARS or ch == ":":
            j = i
            while j < len(text) and (text[j] in _NAME_CHARS or text[j] == ":"):
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        raise RuleError(f"line {line}: unexpected character {ch!r} in rule")
    return tokens


class _RuleParser:
    def __init__(self, rule_id: str, tokens: list[str], line: int, catalog) -> None:
        self.rule_id = rule_id
        self.tokens = tokens
        self.line = line
        self.catalog = catalog
        self.index = 0

    def fail(self, message: str) -> RuleError:
        return RuleError(f"line {self.line}: rule {self.rule_id}: {message}")

    def peek(self) -> str | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def next(self) -> str:
        token = self.peek()
        if token is None:
            raise self.fail("unexpected end of rule")
        self.index += 1
        return token

    def expect(self, token: str) -> None:
        found = self.next()
        if found != token:
            raise self.fail(f"expected {token!r}, found {found!r}")

    def parse(self) -> tuple[tuple[Atom, ...], Atom]:
        body = [self.parse_atom(allow_not=True)]
        while self.peek() == ",":
            self.next()
            body.append(self.parse_atom(allow_not=True))
        self.expect("->")
        head = self.parse_atom(allow_not=False)
        if self.peek() is not None:
            raise self.fail(f"unexpected trailing token {self.peek()!r}")
        return tuple(body), head

    def parse_atom(self, allow_not: bool) -> Atom:
        negated = False
        token = self.next()
        if token == "not":
            if not allow_not:
                raise self.fail("negation is not allowed in a rule head")
            negated = True
            token = self.next()
        predicate_name = token
        self.expect("(")
        args = [self.parse_arg()]
        if self.peek() == ",":
            self.next()
            args.append(self.parse_arg())
        self.expect(")")
        if len(args) == 1:
            predicate = self.resolve(predicate_name, ("class",))
        else:
            predicate = self.resolve(predicate_name, ("property",))
        return Atom(predicate, tuple(args), negated)

    def parse_arg(self) -> RuleArg:
        token = self.next()
        if token.startswith("?"):
            return RuleArg(VAR, token[1:])
        if token == "_":
            return RuleArg(ANY)
        if token in (",", ")", "(", "->"):
            raise self.fail(f"expected an argument, found {token!r}")
        return RuleArg(CONST, self.resolve(token, ("individual", "class")))

    def resolve(self, name: str, categories: tuple[str, ...]) -> str:
        last_error: Exception | None = None
        for category in categories:
            try:
                return self.catalog.resolve(name, category)
            except KeyError as exc:
                last_error = exc
        raise self.fail(f"cannot resolve name {name!r}: {last_error}")


def _compute_strata(rules: list[tuple[str, tuple[Atom, ...], Atom]], line_of: dict[str, int]) -> dict[str, int]:
    idb = {head.key() for _, _, head in rules}
    stratum = {key: 0 for key in idb}
    limit = len(idb) + 1
    for _ in range(limit + 1):
        changed = False
        for rule_id, body, head in rules:
            head_key = head.key()
            needed = stratum[head_key]
            for atom in body:
                key = atom.key()
                if key not in idb:
                    continue
                lower_bound = stratum[key] + 1 if atom.negated else stratum[key]
                needed = max(needed, lower_bound)
            if needed > stratum[head_key]:
                stratum[head_key] = needed
                changed = True
                if needed > limit:
                    raise RuleError(
                        f"line {line_of[rule_id]}: rule {rule_id}: rules are not stratifiable "
                        f"(cycle through negation involving {head.predicate})"
                    )
        if not changed:
            return stratum
    raise RuleError("rules are not stratifiable (cycle through negation)")


def parse_rules(text: str, catalog=None) -> list[Rule]:
    """Parse a rule file into stratified rules, in file order.

    ``catalog`` resolves bare names; when omitted, the catalog of the
    bundled assets is used.
    """
    if catalog is None:
        from .assets import default_catalog

        catalog = default_catalog()
    parsed: list[tuple[str, tuple[Atom, ...], Atom]] = []
    line_of: dict[str, int] = {}
    for line, statement in _split_statements(text):
        head_id, sep, rest = statement.partition(":")
        rule_id = head_id.strip()
        if not sep or not rule_id or any(ch.isspace() for ch in rule_id):
            raise RuleError(f"line {line}: rule must start with 'id:', found {statement[:40]!r}")
        if rule_id in line_of:
            raise RuleError(f"line {line}: duplicate rule id {rule_id!r}")
        tokens = _tokenize_rule(rest, line)
        body, head = _RuleParser(rule_id, tokens, line, catalog).parse()
        _check_safety(rule_id, body, head, line)
        parsed.append((rule_id, body, head))
        line_of[rule_id] = line
    strata = _compute_strata(parsed, line_of)
    return [
        Rule(rule_id, body, head, strata[head.key()])
        for rule_id, body, head in parsed
    ]


def assign_strata(rules: list[Rule]) -> list[Rule]:
    """Recompute strata for rules built programmatically (ids must be unique)."""
    parsed = [(rule.id, rule.body, rule.head) for rule in rules]
    strata = _compute_strata(parsed, {rule.id: 0 for rule in rules})
    return [Rule(rule.id, rule.body, rule.head, strata[rule.head.key()]) for rule in rules]


def _check_safety(rule_id: str, body: tuple[Atom, ...], head: Atom, line: int) -> None:
    positive_vars: set[str] = set()
    for atom in body:
        if not atom.negated:
            positive_vars |= atom.variables()
    for arg in head.args:
        if arg.kind == ANY:
            raise RuleError(f"line {line}: rule {rule_id}: '_' cannot appear in a rule head")
        if arg.kind == VAR and arg.value not in positive_vars:
            raise RuleError(
                f"line {line}: rule {rule_id}: head variable ?{arg.value} is not bound by a positive body atom"
            )
    for atom in body:
        if atom.negated:
            unbound = atom.variables() - positive_vars
            if unbound:
                name = sorted(unbound)[0]
                raise RuleError(
                    f"line {line}: rule {rule_id}: variable ?{name} appears only in a negated atom; "
                    "bind it positively or use '_'"
                )


# ---------------------------------------------------------------------------
# Evaluation


def _atom_pattern(atom: Atom, binding: dict[str, Term]) -> tuple[Term | None, Term, Term | None]:
    def resolve_arg(arg: RuleArg) -> Term | None:
        if arg.kind == CONST:
            return iri(arg.value)
        if arg.kind == VAR:
            return binding.get(arg.value)
        return None

    if atom.is_class_atom():
        return (resolve_arg(atom.args[0]), _TYPE, iri(atom.predicate))
    return (resolve_arg(atom.args[0]), iri(atom.predicate), resolve_arg(atom.args[1]))


def _extend_binding(atom: Atom, triple: Triple, binding: dict[str, Term]) -> dict[str, Term] | None:
    extended = dict(binding)
    slots = [(atom.args[0], triple.s)]
    if not atom.is_class_atom():
        slots.append((atom.args[1], triple.o))
    for arg, term in slots:
        if arg.kind == VAR:
            bound = extended.get(arg.value)
            if bound is None:
                extended[arg.value] = term
            elif bound != term:
                return None
    return extended


def _match_atom(atom: Atom, graph: Graph, binding: dict[str, Term], restrict: set[Triple] | None = None):
    s, p, o = _atom_pattern(atom, binding)
    if restrict is None:
        candidates = graph.match(s, p, o)
    else:
        candidates = [
            t
            for t in restrict
            if t.p == p and (s is None or t.s == s) and (o is None or t.o == o)
        ]
    for triple in candidates:
        extended = _extend_binding(atom, triple, binding)
        if extended is not None:
            yield extended


def _negation_holds(atom: Atom, graph: Graph, binding: dict[str, Term]) -> bool:
    """True when the negated atom has no match, so the binding survives."""
    s, p, o = _atom_pattern(atom, binding)
    return not graph.match(s, p, o)


def _match_body(rule: Rule, graph: Graph, delta: set[Triple] | None):
    positives = [a for a in rule.body if not a.negated]
    negatives = [a for a in rule.body if a.negated]

    def join(index: int, binding: dict[str, Term], delta_slot: int | None):
        if index == len(positives):
            if all(_negation_holds(a, graph, binding) for a in negatives):
                yield binding
            return
        restrict = delta if delta_slot == index else None
        for extended in _match_atom(positives[index], graph, binding, restrict):
            yield from join(index + 1, extended, delta_slot)

    if not positives:
        if delta is None and all(_negation_holds(a, graph, {}) for a in negatives):
            yield {}
        return
    if delta is None:
        yield from join(0, {}, None)
        return
    seen: set[tuple[tuple[str, Term], ...]] = set()
    for slot in range(len(positives)):
        for binding in join(0, {}, slot):
            key = tuple(sorted(binding.items()))
            if key not in seen:
                seen.add(key)
                yield binding


def _instantiate(head: Atom, binding: dict[str, Term]) -> Triple:
    s, p, o = _atom_pattern(head, binding)
    assert s is not None and o is not None, "safety check guarantees ground heads"
    return Triple(s, p, o)


def evaluate_with_provenance(graph: Graph, rules: list[Rule]) -> tuple[Graph, list[Firing]]:
    """Evaluate stratified rules to fixpoint; return the extended graph and
    one Firing per distinct (rule, binding) body match."""
    out = graph.copy()
    firings: list[Firing] = []
    seen: set[tuple[str, tuple[tuple[str, Term], ...]]] = set()
    for stratum in sorted({rule.stratum for rule in rules}):
        group = [rule for rule in rules if rule.stratum == stratum]
        delta: set[Triple] | None = None
        while True:
            added: set[Triple] = set()
            for rule in group:
                for binding in _match_body(rule, out, delta):
                    bound = tuple(sorted(binding.items()))
                    if (rule.id, bound) in seen:
                        continue
                    seen.add((rule.id, bound))
                    derived = _instantiate(rule.head, binding)
                    firings.append(Firing(rule.id, bound, derived))
                    if out.insert(derived):
                        added.add(derived)
            if not added:
                break
            delta = added
    return out, firings


def evaluate_rules(graph: Graph, rules: list[Rule]) -> Graph:
    """Evaluate rules over a (typically materialized) graph; pure function."""
    out, _ = evaluate_with_provenance(graph, rules)
    return out


@dataclass(frozen=True)
class Verdict:
    action: str
    verdict_class: str
    fired_rules: tuple[str, ...]
    firings: tuple[Firing, ...] = field(compare=False, default=())


def classify_actions(graph: Graph, rules: list[Rule]) -> list[Verdict]:
    """Run the verdict rules and report one verdict per morally linked action.

    An action is morally linked when it is typed as an action and carries at
    least one upholds or violates edge.  Actions deriving into more than one
    verdict class raise :class:`VerdictConflictError`; actions matching no
    rule are omitted from the report.
    """
    final, firings = evaluate_with_provenance(graph, rules)
    linked: set[Term] = set()
    for prop in (UPHOLDS_PRINCIPLE, VIOLATES_PRINCIPLE):
        for triple in final.match(None, iri(prop), None):
            if Triple(triple.s, _TYPE, iri(ACTION)) in final:
                linked.add(triple.s)
    verdicts: list[Verdict] = []
    for action in sorted(linked, key=Term.sort_key):
        found = [vc for vc in VERDICT_CLASSES if Triple(action, _TYPE, iri(vc)) in final]
        if len(found) > 1:
            raise VerdictConflictError(action.value, tuple(found))
        if not found:
            continue
        relevant = tuple(f for f in firings if f.derived == Triple(action, _TYPE, iri(found[0])))
        rule_ids = tuple(sorted({f.rule_id for f in relevant}))
        verdicts.append(Verdict(action.value, found[0], rule_ids, relevant))
    return verdicts
