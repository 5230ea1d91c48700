"""Compiler and Linked Data server for semantically annotated lecture notes.

Pipeline: .stex sources -> TheoryCollection -> OMDoc XML, XHTML+MathML+RDFa
pages, and an RDF structural outline, all behind a versioned repository
whose commit hook rejects anything that does not build.
"""

from .errors import (FormatError, MissingNotation, ParseError, PatternError,
                     RepoError, ResolveError)
from .model import (Apply, Bind, Formula, Int, ProseRun, Ref, Statement, Sym,
                    SymbolInfo, Theory, TheoryCollection, Var, Violation,
                    entities, statement_uri, step_uri, symbol_uri, theory_uri,
                    uri_for, validate)
from .notation import parse_template
from .omdoc_xml import from_xml, theory_projection_xml, to_xml
from .ontology import emit_ontology
from .query import GapReport, Store, examples_for, find_gaps, select
from .rdf import (Triple, Vocabulary, extract, serialize_ntriples,
                  serialize_turtle)
from .render import (RenderContext, RenderedFormula, context_for, linearize,
                     render_document, render_object)
from .repo import Accepted, Config, Rejected, Repository, Revision, build
from .stex import (Scope, ScopeSymbol, SourceModule, parse_math, parse_module,
                   resolve, scope_for)

__version__ = "0.1.0"

__all__ = [
    "Accepted", "Apply", "Bind", "Config", "Formula", "FormatError",
    "GapReport", "Int", "MissingNotation", "ParseError", "PatternError",
    "ProseRun", "Ref", "Rejected", "RenderContext", "RenderedFormula",
    "RepoError", "Repository", "ResolveError", "Revision", "Scope",
    "ScopeSymbol", "SourceModule", "Statement", "Store", "Sym", "SymbolInfo",
    "Theory", "TheoryCollection", "Triple", "Var", "Violation", "Vocabulary",
    "build", "context_for", "emit_ontology", "entities", "examples_for",
    "extract", "find_gaps", "from_xml", "linearize", "parse_math",
    "parse_module", "parse_template", "render_document", "render_object",
    "resolve", "scope_for", "select", "serialize_ntriples", "serialize_turtle",
    "statement_uri", "step_uri", "symbol_uri", "theory_projection_xml",
    "theory_uri", "to_xml", "uri_for", "validate",
]
