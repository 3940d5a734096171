"""In-memory triple store with set semantics and deterministic iteration.

The store keeps three nested-dict indexes (subject, predicate, object keyed
first) so :meth:`Graph.match` can answer any bound/unbound combination of a
triple pattern without scanning.  All read paths return results sorted by
term order, so two graphs holding the same triples behave identically no
matter how they were built.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator

from .terms import Term, Triple


def _index_add(index: dict, a: Term, b: Term, c: Term) -> None:
    index.setdefault(a, {}).setdefault(b, set()).add(c)


def _index_remove(index: dict, a: Term, b: Term, c: Term) -> None:
    second = index[a]
    third = second[b]
    third.discard(c)
    if not third:
        del second[b]
    if not second:
        del index[a]


class Graph:
    """A mutable set of triples indexed for pattern matching."""

    __slots__ = ("_triples", "_spo", "_pos", "_osp")

    def __init__(self, triples: Iterable[Triple] = ()) -> None:
        self._triples: set[Triple] = set()
        self._spo: dict[Term, dict[Term, set[Term]]] = {}
        self._pos: dict[Term, dict[Term, set[Term]]] = {}
        self._osp: dict[Term, dict[Term, set[Term]]] = {}
        for triple in triples:
            self.insert(triple)

    def insert(self, triple: Triple) -> bool:
        """Add a triple; return True when it was not already present."""
        if not isinstance(triple, Triple):
            raise TypeError(f"expected a Triple, got {type(triple).__name__}")
        if triple in self._triples:
            return False
        self._triples.add(triple)
        _index_add(self._spo, triple.s, triple.p, triple.o)
        _index_add(self._pos, triple.p, triple.o, triple.s)
        _index_add(self._osp, triple.o, triple.s, triple.p)
        return True

    def remove(self, triple: Triple) -> bool:
        """Discard a triple; return True when it was present."""
        if triple not in self._triples:
            return False
        self._triples.remove(triple)
        _index_remove(self._spo, triple.s, triple.p, triple.o)
        _index_remove(self._pos, triple.p, triple.o, triple.s)
        _index_remove(self._osp, triple.o, triple.s, triple.p)
        return True

    def match(self, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> list[Triple]:
        """All triples matching the pattern, None acting as a wildcard, sorted.

        Patterns no stored triple could ever satisfy (a literal in subject
        position, a non-IRI predicate) match nothing rather than raising, so
        callers can probe with arbitrary bound terms.
        """
        if (s is not None and s.is_literal()) or (p is not None and not p.is_iri()):
            return []
        found: Iterable[Triple]
        if s is not None and p is not None and o is not None:
            candidate = Triple(s, p, o)
            found = [candidate] if candidate in self._triples else []
        elif s is not None:
            by_p = self._spo.get(s, {})
            predicates = [p] if p is not None else list(by_p)
            found = [
                Triple(s, pred, obj)
                for pred in predicates
                for obj in by_p.get(pred, ())
                if o is None or obj == o
            ]
        elif p is not None:
            by_o = self._pos.get(p, {})
            objects = [o] if o is not None else list(by_o)
            found = [Triple(subj, p, obj) for obj in objects for subj in by_o.get(obj, ())]
        elif o is not None:
            by_s = self._osp.get(o, {})
            found = [Triple(subj, pred, o) for subj in by_s for pred in by_s[subj]]
        else:
            found = self._triples
        return sorted(found, key=Triple.sort_key)

    def subjects(self, p: Term | None = None, o: Term | None = None) -> list[Term]:
        """Distinct subjects of triples matching (?, p, o), sorted."""
        return sorted({t.s for t in self.match(None, p, o)}, key=Term.sort_key)

    def objects(self, s: Term | None = None, p: Term | None = None) -> list[Term]:
        """Distinct objects of triples matching (s, p, ?), sorted."""
        return sorted({t.o for t in self.match(s, p, None)}, key=Term.sort_key)

    def nodes(self) -> list[Term]:
        """Every IRI or blank node appearing in subject or object position, sorted."""
        seen = set(self._spo)
        seen.update(term for term in self._osp if not term.is_literal())
        return sorted(seen, key=Term.sort_key)

    def predicates(self) -> list[Term]:
        return sorted(self._pos, key=Term.sort_key)

    def copy(self) -> "Graph":
        clone = Graph()
        clone._triples = set(self._triples)
        clone._spo = {a: {b: set(c) for b, c in inner.items()} for a, inner in self._spo.items()}
        clone._pos = {a: {b: set(c) for b, c in inner.items()} for a, inner in self._pos.items()}
        clone._osp = {a: {b: set(c) for b, c in inner.items()} for a, inner in self._osp.items()}
        return clone

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=Triple.sort_key))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __repr__(self) -> str:
        return f"Graph({len(self._triples)} triples)"
