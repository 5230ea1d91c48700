"""Ontology document: coverage of the closed vocabulary."""

from lectures.ontology import CLASS, TERMS, emit_ontology
from lectures.rdf import CLASSES, PREDICATES, DEFAULT_VOCAB, Vocabulary
from oracles import RDF_TYPE, parse_turtle

RDFS = "http://www.w3.org/2000/01/rdf-schema#"
ONT = DEFAULT_VOCAB.namespace


def test_required_statements_present():
    text = emit_ontology()
    assert "o:Example a rdfs:Class" in text
    assert "o:exemplifies" in text
    parsed = parse_turtle(text)
    assert (ONT + "exemplifies", RDFS + "domain", ONT + "Example", False) in parsed


def test_term_counts():
    classes = [t for t in TERMS if t.kind == CLASS]
    properties = [t for t in TERMS if t.kind != CLASS]
    assert len(classes) == 8
    assert len(properties) == 9
    assert tuple(t.name for t in classes) == CLASSES
    assert tuple(t.name for t in properties) == PREDICATES


def test_output_reparses_as_turtle():
    parsed = parse_turtle(emit_ontology())
    typed = {s for s, p, _, _ in parsed if p == RDF_TYPE}
    assert len(typed) == 17


def test_every_extractor_predicate_defined_exactly_once():
    text = emit_ontology()
    for name in PREDICATES:
        assert text.count(f"o:{name} a ") == 1
    for name in CLASSES:
        assert text.count(f"o:{name} a ") == 1


def test_domains_and_ranges():
    parsed = parse_turtle(emit_ontology())
    assert (ONT + "defines", RDFS + "domain", ONT + "Definition", False) in parsed
    assert (ONT + "defines", RDFS + "range", ONT + "Symbol", False) in parsed
    assert (ONT + "proves", RDFS + "range", ONT + "Theorem", False) in parsed
    assert (ONT + "title", RDFS + "range", RDFS + "Literal", False) in parsed


def test_custom_namespace():
    vocab = Vocabulary("http://other.org/v#")
    text = emit_ontology(vocab)
    assert "@prefix o: <http://other.org/v#> ." in text
