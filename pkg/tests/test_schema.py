"""Schema extraction: hierarchies, disjointness cliques, obligations, names."""

import random

import pytest

from applekit.schema import (
    NameCatalog,
    Obligation,
    SchemaError,
    extract_schema,
    local_name,
)
from applekit.terms import PrefixMap, Triple, iri, literal
from applekit.turtle import parse_turtle

EX = "http://example.org/"
HEADER = (
    f"@prefix ex: <{EX}> .\n"
    "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
    "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
    "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
    "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
)


def schema_of(text):
    return extract_schema(parse_turtle(HEADER + text))


class TestDetection:
    def test_classes_and_properties_from_declarations(self):
        s = schema_of(
            "ex:C a owl:Class . ex:p a owl:ObjectProperty .\n"
            "ex:d a owl:DatatypeProperty . ex:q a rdf:Property ."
        )
        assert s.classes == {EX + "C"}
        assert s.properties == {EX + "p", EX + "d", EX + "q"}

    def test_typing_an_individual_declares_its_class(self):
        s = schema_of("ex:alice a ex:Person .")
        assert EX + "Person" in s.classes
        assert EX + "alice" not in s.classes

    def test_axiom_participants_are_declared_implicitly(self):
        s = schema_of(
            "ex:A rdfs:subClassOf ex:B .\n"
            "ex:p rdfs:subPropertyOf ex:q .\n"
            "ex:r rdfs:domain ex:D ; rdfs:range ex:R ."
        )
        assert {EX + "A", EX + "B", EX + "D", EX + "R"} <= s.classes
        assert {EX + "p", EX + "q", EX + "r"} <= s.properties

    def test_builtins_never_listed(self):
        s = schema_of("ex:C rdfs:subClassOf owl:Thing . ex:p rdfs:subPropertyOf rdfs:label .")
        assert all("w3.org" not in c for c in s.classes)
        assert all("w3.org" not in p for p in s.properties)
        # The axioms themselves are still recorded.
        assert (EX + "C", "http://www.w3.org/2002/07/owl#Thing") in s.sub_class_of


class TestHierarchies:
    def setup_method(self):
        self.s = schema_of(
            "ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C .\n"
            "ex:p rdfs:subPropertyOf ex:q . ex:q rdfs:subPropertyOf ex:r ."
        )

    def test_superclasses_transitive_and_strict(self):
        assert self.s.superclasses(EX + "A") == {EX + "B", EX + "C"}
        assert self.s.superclasses(EX + "C") == frozenset()

    def test_is_subclass_reflexive(self):
        assert self.s.is_subclass(EX + "A", EX + "A")
        assert self.s.is_subclass(EX + "A", EX + "C")
        assert not self.s.is_subclass(EX + "C", EX + "A")

    def test_superproperties(self):
        assert self.s.superproperties(EX + "p") == {EX + "q", EX + "r"}
        assert self.s.is_subproperty(EX + "p", EX + "r")
        assert self.s.is_subproperty(EX + "p", EX + "p")

    def test_reflexive_subclass_assertion_tolerated(self):
        s = schema_of("ex:A rdfs:subClassOf ex:A .")
        assert not s.superclasses(EX + "A") - {EX + "A"}

    def test_two_node_cycle_rejected(self):
        with pytest.raises(SchemaError, match="subclass cycle"):
            schema_of("ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:A .")

    def test_long_cycle_rejected_and_named(self):
        with pytest.raises(SchemaError) as err:
            schema_of(
                "ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C .\n"
                "ex:C rdfs:subClassOf ex:A ."
            )
        assert str(err.value).count(EX) >= 3

    def test_diamond_is_not_a_cycle(self):
        s = schema_of(
            "ex:A rdfs:subClassOf ex:B, ex:C .\n"
            "ex:B rdfs:subClassOf ex:D . ex:C rdfs:subClassOf ex:D ."
        )
        assert s.superclasses(EX + "A") == {EX + "B", EX + "C", EX + "D"}


class TestDomainsRangesInverses:
    def test_domain_and_range_maps(self):
        s = schema_of("ex:p rdfs:domain ex:D1, ex:D2 ; rdfs:range ex:R .")
        assert s.domain_of[EX + "p"] == {EX + "D1", EX + "D2"}
        assert s.range_of[EX + "p"] == {EX + "R"}

    def test_datatype_ranges_skipped(self):
        s = schema_of("ex:p a owl:DatatypeProperty ; rdfs:range xsd:date .")
        assert EX + "p" not in s.range_of
        assert EX + "p" in s.properties

    def test_inverse_pairs_canonicalized(self):
        a = schema_of("ex:p owl:inverseOf ex:q .")
        b = schema_of("ex:q owl:inverseOf ex:p .")
        assert a.inverse_of == b.inverse_of
        assert a.inverse_partners(EX + "p") == {EX + "q"}
        assert a.inverse_partners(EX + "q") == {EX + "p"}
        assert a.inverse_partners(EX + "other") == frozenset()


class TestDisjointness:
    def test_pairwise_triangle_is_one_clique(self):
        s = schema_of(
            "ex:A owl:disjointWith ex:B . ex:B owl:disjointWith ex:C .\n"
            "ex:A owl:disjointWith ex:C . ex:D owl:disjointWith ex:E ."
        )
        assert set(s.disjoint_sets) == {
            frozenset({EX + "A", EX + "B", EX + "C"}),
            frozenset({EX + "D", EX + "E"}),
        }

    def test_open_path_gives_two_maximal_cliques(self):
        s = schema_of("ex:A owl:disjointWith ex:B . ex:B owl:disjointWith ex:C .")
        assert set(s.disjoint_sets) == {
            frozenset({EX + "A", EX + "B"}),
            frozenset({EX + "B", EX + "C"}),
        }

    def test_direction_and_self_assertions_ignored(self):
        s = schema_of("ex:B owl:disjointWith ex:A . ex:A owl:disjointWith ex:A .")
        assert set(s.disjoint_sets) == {frozenset({EX + "A", EX + "B"})}


RESTRICTION = (
    "ex:C rdfs:subClassOf _:r .\n"
    "_:r a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:F .\n"
    "ex:p a owl:ObjectProperty . ex:F a owl:Class .\n"
)


class TestObligations:
    def test_restriction_becomes_obligation(self):
        s = schema_of(RESTRICTION)
        assert s.obligations == (Obligation(EX + "C", EX + "p", EX + "F"),)

    def test_shared_restriction_node_applies_to_each_subclass(self):
        s = schema_of(RESTRICTION + "ex:D rdfs:subClassOf _:r .")
        assert {ob.on_class for ob in s.obligations} == {EX + "C", EX + "D"}
        assert len(s.obligations) == 2

    def test_inherited_obligations_follow_subclass_closure(self):
        s = schema_of(RESTRICTION + "ex:Sub rdfs:subClassOf ex:C .")
        assert s.inherited_obligations(EX + "Sub") == s.obligations
        assert s.inherited_obligations(EX + "F") == ()

    def test_untyped_blank_superclass_rejected(self):
        with pytest.raises(SchemaError, match="owl:Restriction"):
            schema_of("ex:C rdfs:subClassOf _:x .")

    @pytest.mark.parametrize(
        "body",
        [
            "ex:C rdfs:subClassOf _:r .\n_:r a owl:Restriction ; owl:onProperty ex:p .\nex:p a owl:ObjectProperty .",
            "ex:C rdfs:subClassOf _:r .\n_:r a owl:Restriction ; owl:someValuesFrom ex:F .",
            RESTRICTION + "_:r owl:onProperty ex:q .\nex:q a owl:ObjectProperty .",
        ],
        ids=["missing-filler", "missing-property", "two-properties"],
    )
    def test_malformed_restrictions_rejected(self, body):
        with pytest.raises(SchemaError, match="exactly one"):
            schema_of(body)

    def test_builtin_obligation_property_rejected(self):
        with pytest.raises(SchemaError, match="undeclared property"):
            schema_of(
                "ex:C rdfs:subClassOf _:r .\n"
                "_:r a owl:Restriction ; owl:onProperty rdf:type ; owl:someValuesFrom ex:F ."
            )


class TestClassLevelTriples:
    def test_punned_edges_captured_builtin_predicates_skipped(self):
        s = schema_of(
            "ex:C a owl:Class ; ex:linksTo ex:D ; rdfs:label \"C\" .\n"
            "ex:i a ex:C ; ex:linksTo ex:D ."
        )
        subjects = {t.s.value for t in s.class_level_triples}
        predicates = {t.p.value for t in s.class_level_triples}
        assert subjects == {EX + "C"}
        assert predicates == {EX + "linksTo"}

    def test_extraction_is_order_independent(self):
        text = (
            "ex:A rdfs:subClassOf ex:B . ex:p rdfs:domain ex:A .\n"
            "ex:A owl:disjointWith ex:Z .\n" + RESTRICTION
        )
        base = extract_schema(parse_turtle(HEADER + text))
        triples = list(parse_turtle(HEADER + text))
        for seed in range(5):
            random.Random(seed).shuffle(triples)
            from applekit.graph import Graph

            assert extract_schema(Graph(triples)) == base


class TestLocalName:
    @pytest.mark.parametrize(
        "value,expected",
        [
            ("http://a.test/b#c", "c"),
            ("http://a.test/b/c", "c"),
            ("http://a.test/b", "b"),
            ("urn:x", "urn:x"),
            ("http://a.test/", "http://a.test/"),
        ],
    )
    def test_local_name(self, value, expected):
        assert local_name(value) == expected


CATALOG_GRAPH = (
    "ex:Person a owl:Class . ex:knows a owl:ObjectProperty .\n"
    "ex:alice a ex:Person .\n"
    "@prefix other: <http://other.test/> .\n"
    "other:Person a owl:Class ."
)


class TestNameCatalog:
    def setup_method(self):
        graph = parse_turtle(HEADER + CATALOG_GRAPH)
        self.catalog = NameCatalog.from_graph(graph, prefixes=PrefixMap({"ex": EX}))

    def test_bracketed_iri_passes_through(self):
        assert self.catalog.resolve(f"<{EX}anything>", "class") == EX + "anything"

    def test_prefixed_name_expands(self):
        assert self.catalog.resolve("ex:Whatever", "class") == EX + "Whatever"
        with pytest.raises(KeyError, match="undeclared prefix"):
            self.catalog.resolve("zz:X", "class")

    def test_bare_names_resolve_per_category(self):
        assert self.catalog.resolve("knows", "property") == EX + "knows"
        assert self.catalog.resolve("alice", "individual") == EX + "alice"

    def test_ambiguous_bare_name_lists_candidates(self):
        with pytest.raises(KeyError) as err:
            self.catalog.resolve("Person", "class")
        message = str(err.value)
        assert "ambiguous" in message
        assert EX + "Person" in message and "http://other.test/Person" in message

    def test_unknown_name_and_category(self):
        with pytest.raises(KeyError, match="unknown class name"):
            self.catalog.resolve("Nonexistent", "class")
        with pytest.raises(ValueError, match="category"):
            self.catalog.resolve("x", "nope")

    def test_punned_class_not_listed_as_individual(self):
        graph = parse_turtle(HEADER + "ex:C a owl:Class ; ex:p ex:D .\nex:i a ex:C .")
        catalog = NameCatalog.from_graph(graph)
        with pytest.raises(KeyError):
            catalog.resolve("C", "individual")
        assert catalog.resolve("C", "class") == EX + "C"

    def test_ambiguous_names_report(self):
        assert self.catalog.ambiguous_names() == {
            "Person": {EX + "Person", "http://other.test/Person"}
        }

    def test_custom_aliases(self):
        graph = parse_turtle(HEADER + "ex:Person a owl:Class .")
        catalog = NameCatalog.from_graph(graph, prefixes=PrefixMap({"ex": EX}))
        # Default alias table has no entry for this name.
        with pytest.raises(KeyError):
            catalog.resolve("People", "class")
        aliased = NameCatalog(
            {"Person": {EX + "Person"}}, {}, {}, PrefixMap({"ex": EX}), {"People": "Person"}
        )
        assert aliased.resolve("People", "class") == EX + "Person"
