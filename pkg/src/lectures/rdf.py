"""RDF extraction (structural outline) and deterministic serialization.

The extractor emits only the closed ontology vocabulary plus rdf:type; no
prose text and no formula trees ever appear in the output.  Both serializers
order triples by subject, then predicate, then object, so equal inputs give
byte-identical output.
"""

from dataclasses import dataclass

from .model import (Formula, looks_generated, ref_uri, statement_uri,
                    step_uri, symbol_uri, symbols_in, theory_uri)

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDF_TYPE = RDF_NS + "type"

ONTOLOGY_NS = "http://ex.org/ontology#"

CLASSES = ("Theory", "Symbol", "Definition", "Example", "Theorem", "Axiom",
           "Proof", "ProofStep")
PREDICATES = ("imports", "declares", "defines", "exemplifies", "proves",
              "hasStep", "justifiedBy", "usesSymbol", "title")

_KIND_CLASS = {"definition": "Definition", "example": "Example",
               "theorem": "Theorem", "axiom": "Axiom", "proof": "Proof"}
_KIND_PREDICATE = {"definition": "defines", "example": "exemplifies",
                   "proof": "proves"}


@dataclass(frozen=True)
class Vocabulary:
    namespace: str = ONTOLOGY_NS

    def term(self, name):
        if name not in CLASSES and name not in PREDICATES:
            raise ValueError(f"'{name}' is outside the closed vocabulary")
        return self.namespace + name


DEFAULT_VOCAB = Vocabulary()


@dataclass(frozen=True, order=True)
class Triple:
    s: str
    p: str
    o: str
    literal: bool = False


def extract(collection, vocab=DEFAULT_VOCAB, base_uri=None):
    """Structural outline of a collection as a frozenset of Triples."""
    base = base_uri or collection.base_uri
    o = vocab.term
    out = set()
    for tid, theory in collection.theories.items():
        turi = theory_uri(base, tid)
        out.add(Triple(turi, RDF_TYPE, o("Theory")))
        for imp in theory.imports:
            out.add(Triple(turi, o("imports"), theory_uri(base, imp)))
        for sym in theory.symbols:
            suri = symbol_uri(base, tid, sym.name)
            out.add(Triple(turi, o("declares"), suri))
            out.add(Triple(suri, RDF_TYPE, o("Symbol")))
        for st in theory.statements:
            uri = statement_uri(base, tid, st.id)
            out.add(Triple(uri, RDF_TYPE, o(_KIND_CLASS[st.kind])))
            pred = _KIND_PREDICATE.get(st.kind)
            if pred:
                for ref in st.for_targets:
                    out.add(Triple(uri, o(pred), ref_uri(base, ref)))
            if not looks_generated(st):
                out.add(Triple(uri, o("title"), st.id, literal=True))
            used = set()
            for item in st.content:
                if isinstance(item, Formula):
                    used |= symbols_in(item.object)
            for step in st.steps:
                suri = step_uri(base, tid, st.id, step.index)
                out.add(Triple(suri, RDF_TYPE, o("ProofStep")))
                out.add(Triple(uri, o("hasStep"), suri))
                if step.justification is not None:
                    out.add(Triple(suri, o("justifiedBy"),
                                   ref_uri(base, step.justification)))
                for item in step.content:
                    if isinstance(item, Formula):
                        used |= symbols_in(item.object)
            for sym in used:
                out.add(Triple(uri, o("usesSymbol"),
                               symbol_uri(base, sym.theory, sym.name)))
    return frozenset(out)


def restrict_to_theory(triples, theory_uri_):
    """Triples whose subject lives in one theory's document."""
    prefix = theory_uri_ + "#"
    return frozenset(t for t in triples
                     if t.s == theory_uri_ or t.s.startswith(prefix))


# ---------------------------------------------------------------------------
# Serialization

_NT_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _nt_literal(value):
    return '"' + "".join(_NT_ESCAPES.get(ch, ch) for ch in value) + '"'


def _nt_term(triple):
    return _nt_literal(triple.o) if triple.literal else f"<{triple.o}>"


def serialize_ntriples(triples):
    """One sorted triple per line; empty set gives the empty string."""
    lines = [f"<{t.s}> <{t.p}> {_nt_term(t)} ."
             for t in sorted(triples)]
    return "".join(line + "\n" for line in lines)


def _prefixes(vocab):
    return {"o": vocab.namespace, "rdf": RDF_NS}


def _turtle_term(uri, prefixes):
    for prefix, ns in prefixes.items():
        if uri.startswith(ns):
            local = uri[len(ns):]
            if local and all(c.isalnum() or c in "-_" for c in local):
                return f"{prefix}:{local}"
    return f"<{uri}>"


def serialize_turtle(triples, vocab=DEFAULT_VOCAB, extra_prefixes=None):
    """Turtle grouped by subject, with @prefix o: and @prefix rdf: headers."""
    prefixes = _prefixes(vocab)
    if extra_prefixes:
        prefixes.update(extra_prefixes)
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in sorted(prefixes.items())]
    lines.append("")
    ordered = sorted(triples)
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j].s == ordered[i].s:
            j += 1
        group = ordered[i:j]
        parts = []
        for t in group:
            pred = "a" if t.p == RDF_TYPE else _turtle_term(t.p, prefixes)
            obj = _nt_literal(t.o) if t.literal else _turtle_term(t.o, prefixes)
            parts.append(f"{pred} {obj}")
        head = f"<{group[0].s}> {parts[0]}"
        if len(parts) == 1:
            lines.append(head + " .")
        else:
            lines.append(head + " ;")
            for part in parts[1:-1]:
                lines.append(f"    {part} ;")
            lines.append(f"    {parts[-1]} .")
        i = j
    return "\n".join(lines) + "\n"
