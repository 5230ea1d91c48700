"""The ontology vocabulary as dereferenceable documentation.

Term names mirror the closed set the extractor emits; expressivity stays at
the rdfs level (labels, comments, domain/range) — no OWL.
"""

from dataclasses import dataclass

from .rdf import DEFAULT_VOCAB, RDF_NS

RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"

CLASS = "Class"
OBJECT_PROPERTY = "ObjectProperty"
DATATYPE_PROPERTY = "DatatypeProperty"


@dataclass(frozen=True)
class OntologyTerm:
    name: str
    kind: str  # Class | ObjectProperty | DatatypeProperty
    label: str
    comment: str
    domain: str | None = None  # local names
    range: str | None = None


TERMS = (
    OntologyTerm("Theory", CLASS, "Theory",
                 "A named collection of symbols and statements."),
    OntologyTerm("Symbol", CLASS, "Symbol",
                 "A mathematical symbol declared by a theory."),
    OntologyTerm("Definition", CLASS, "Definition",
                 "A statement giving meaning to one or more symbols."),
    OntologyTerm("Example", CLASS, "Example",
                 "A statement illustrating a symbol or another statement."),
    OntologyTerm("Theorem", CLASS, "Theorem",
                 "An assertion expected to carry a proof."),
    OntologyTerm("Axiom", CLASS, "Axiom",
                 "An assertion taken without proof."),
    OntologyTerm("Proof", CLASS, "Proof",
                 "A structured argument for a theorem."),
    OntologyTerm("ProofStep", CLASS, "ProofStep",
                 "One step of a structured proof."),
    OntologyTerm("imports", OBJECT_PROPERTY, "imports",
                 "The subject theory makes the object theory's symbols visible.",
                 domain="Theory", range="Theory"),
    OntologyTerm("declares", OBJECT_PROPERTY, "declares",
                 "The subject theory introduces the object symbol.",
                 domain="Theory", range="Symbol"),
    OntologyTerm("defines", OBJECT_PROPERTY, "defines",
                 "The subject definition gives meaning to the object symbol.",
                 domain="Definition", range="Symbol"),
    OntologyTerm("exemplifies", OBJECT_PROPERTY, "exemplifies",
                 "The subject example illustrates the object resource.",
                 domain="Example"),
    OntologyTerm("proves", OBJECT_PROPERTY, "proves",
                 "The subject proof establishes the object theorem.",
                 domain="Proof", range="Theorem"),
    OntologyTerm("hasStep", OBJECT_PROPERTY, "hasStep",
                 "The subject proof contains the object step.",
                 domain="Proof", range="ProofStep"),
    OntologyTerm("justifiedBy", OBJECT_PROPERTY, "justifiedBy",
                 "The subject step cites the object resource as justification.",
                 domain="ProofStep"),
    OntologyTerm("usesSymbol", OBJECT_PROPERTY, "usesSymbol",
                 "A formula of the subject statement mentions the object symbol.",
                 range="Symbol"),
    OntologyTerm("title", DATATYPE_PROPERTY, "title",
                 "Human-readable label of a statement (its explicit id)."),
)


def emit_ontology(vocab=DEFAULT_VOCAB):
    """The vocabulary as a Turtle document (served at the namespace URI)."""
    lines = [
        f"@prefix o: <{vocab.namespace}> .",
        f"@prefix rdf: <{RDF_NS}> .",
        f"@prefix rdfs: <{RDFS_NS}> .",
        "",
    ]
    for term in TERMS:
        kind = "rdfs:Class" if term.kind == CLASS else "rdf:Property"
        lines.append(f"o:{term.name} a {kind} ;")
        lines.append(f'    rdfs:label "{term.label}" ;')
        body = [f'    rdfs:comment "{term.comment}"']
        if term.domain:
            body.append(f"    rdfs:domain o:{term.domain}")
        if term.range:
            body.append(f"    rdfs:range o:{term.range}")
        if term.kind == DATATYPE_PROPERTY:
            body.append("    rdfs:range rdfs:Literal")
        lines.extend(part + " ;" for part in body[:-1])
        lines.append(body[-1] + " .")
        lines.append("")
    return "\n".join(lines)
