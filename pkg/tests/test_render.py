"""Renderer: parallel markup, bracketing, variants, RDFa pages."""

import re
import xml.etree.ElementTree as ET

import pytest

from corpus import BASE
from lectures.errors import MissingNotation
from lectures.model import Apply, Int, Sym, Var
from lectures.notation import parse_template
from lectures.omdoc_xml import om_from_element
from lectures.render import (NotationEntry, RenderContext, context_for,
                             linearize, render_document, render_object)
from lectures.stex import Scope, ScopeSymbol, parse_math

ONT = "http://ex.org/ontology#"


def _tmpl(source):
    return parse_template(source)[0]


@pytest.fixture(scope="module")
def ctx():
    return RenderContext(BASE, {
        ("sets", "union"): NotationEntry(None, 500, _tmpl(r"#*[\cup]")),
        ("combinat", "binom"): NotationEntry(2, 900, _tmpl(r"(#1 \atop #2)"),
                                             (("fr", _tmpl(r"\mathcal{C}^{#2}_{#1}")),)),
        ("sets", "emptyset"): NotationEntry(0, 1000, _tmpl(r"\emptyset")),
        ("wrap", "tight"): NotationEntry(1, 800, _tmpl(r"\circ #1!600")),
    })


UNION_ABC = Apply(Sym("sets", "union"), (Var("A"), Var("B"), Var("C")))
BINOM_NK = Apply(Sym("combinat", "binom"), (Var("n"), Var("k")))


def _strip_ids(elem):
    clone = ET.fromstring(ET.tostring(elem))
    for node in clone.iter():
        node.attrib.pop("id", None)
        node.attrib.pop("xref", None)
    return ET.tostring(clone)


def test_flexary_presentation_row(ctx):
    rendered = render_object(UNION_ABC, ctx)
    row = rendered.presentation
    assert row.tag == "mrow"
    texts = [child.text for child in row]
    assert texts == ["A", "∪", "B", "∪", "C"]
    tags = [child.tag for child in row]
    assert tags == ["mi", "mo", "mi", "mo", "mi"]


def test_math_wrapper_shape(ctx):
    xml = render_object(UNION_ABC, ctx).to_string()
    assert xml.startswith('<math xmlns="http://www.w3.org/1998/Math/MathML">')
    assert "<semantics>" in xml
    assert '<annotation-xml encoding="OpenMath">' in xml
    assert "<OMOBJ>" in xml


def test_xref_bijection(ctx):
    rendered = render_object(UNION_ABC, ctx)
    pres_ids = [n.get("id") for n in rendered.math.iter() if n.get("id")]
    xrefs = [n.get("xref") for n in rendered.content.iter() if n.get("xref")]
    assert sorted(pres_ids) == sorted(xrefs)
    assert len(set(pres_ids)) == len(pres_ids)
    # every Apply/Sym/Var/Int content node is annotated
    for node in rendered.content.iter():
        if node.tag in ("OMA", "OMS", "OMV", "OMI", "OMBIND"):
            assert node.get("xref")


def test_reparse_annotation_and_rerender_identical(ctx):
    rendered = render_object(UNION_ABC, ctx)
    obj = om_from_element(rendered.content[0])
    assert obj == UNION_ABC
    again = render_object(obj, ctx)
    assert ET.tostring(again.presentation) == ET.tostring(rendered.presentation)


def test_variable_leaf(ctx):
    rendered = render_object(Var("x"), ctx)
    assert rendered.presentation.tag == "mi"
    assert rendered.presentation.text == "x"
    assert rendered.content[0].tag == "OMV"


def test_binom_default_stack(ctx):
    xml = render_object(BINOM_NK, ctx).to_string()
    assert '<mfrac linethickness="0">' in xml
    assert "<mo" in xml and "(" in xml


def test_binom_fr_variant_scripts(ctx):
    fr = render_object(BINOM_NK, ctx.with_variant("fr"))
    xml = fr.to_string()
    assert "<msubsup>" in xml
    assert "\U0001d49e" in xml  # script capital C
    sub = ET.tostring(fr.presentation, encoding="unicode")
    # subscript n (slot 1) and superscript k (slot 2)
    assert re.search(r"<msubsup><mi[^>]*>\U0001d49e</mi><mi[^>]*>n</mi><mi[^>]*>k</mi>", sub)


def test_variant_content_identical_to_default(ctx):
    default = render_object(BINOM_NK, ctx)
    fr = render_object(BINOM_NK, ctx.with_variant("fr"))
    assert ET.tostring(default.content) == ET.tostring(fr.content)


def test_unknown_variant_falls_back_to_default(ctx):
    default = render_object(UNION_ABC, ctx)
    other = render_object(UNION_ABC, ctx.with_variant("nosuch"))
    assert ET.tostring(default.math) == ET.tostring(other.math)


def test_missing_notation_raises(ctx):
    with pytest.raises(MissingNotation) as exc:
        render_object(Sym("ghost", "op"), ctx)
    assert "ghost#op" in str(exc.value)


def test_brackets_inserted_on_low_precedence_child(ctx):
    # tight requires >= 600; union has 500 -> bracketed
    obj = Apply(Sym("wrap", "tight"), (Apply(Sym("sets", "union"), (Var("A"), Var("B"))),))
    xml = render_object(obj, ctx).to_string()
    assert ">(</mo>" in xml and ">)</mo>" in xml
    # binom (prec 900) is not bracketed in the same slot
    high = Apply(Sym("wrap", "tight"), (BINOM_NK,))
    assert linearize(high, ctx) == r"\circ (n \atop k)"


def test_linearize_examples(ctx):
    union_ab = Apply(Sym("sets", "union"), (Var("A"), Var("B")))
    assert linearize(union_ab, ctx) == r"A \cup B"
    bracketed = Apply(Sym("wrap", "tight"), (union_ab,))
    assert linearize(bracketed, ctx) == r"\circ (A \cup B)"
    assert linearize(Int(7), ctx) == "7"
    assert linearize(BINOM_NK, ctx.with_variant("fr")) == r"\mathcal{C}^{k}_{n}"
    assert linearize(Apply(Sym("sets", "union"), (Var("A"),)), ctx) == r"\union{A}"


def test_linearize_reparses(ctx):
    scope = Scope([
        ScopeSymbol("sets", "union", None, 500, _tmpl(r"#*[\cup]")),
        ScopeSymbol("combinat", "binom", 2, 900, _tmpl(r"(#1 \atop #2)"),
                    (("fr", _tmpl(r"\mathcal{C}^{#2}_{#1}")),)),
        ScopeSymbol("sets", "emptyset", 0, 1000, _tmpl(r"\emptyset")),
        ScopeSymbol("wrap", "tight", 1, 800, _tmpl(r"\circ #1!600")),
    ])
    for obj in (UNION_ABC, BINOM_NK, Int(7), Var("x"), Sym("sets", "emptyset"),
                Apply(Sym("wrap", "tight"),
                      (Apply(Sym("sets", "union"), (Var("A"), Var("B"))),))):
        for variant in (None, "fr"):
            text = linearize(obj, ctx.with_variant(variant))
            assert parse_math(text, scope) == obj, text


# ---------------------------------------------------------------------------
# Documents


def test_document_sections_and_rdfa(golden_collection):
    ctx = context_for(golden_collection)
    page = render_document(golden_collection.theories["sets"],
                           golden_collection, ctx, ONT)
    assert page.count('typeof="o:Definition"') == 1
    assert page.count('typeof="o:Example"') == 1
    assert f'about="{BASE}/omdoc/sets#union-ex"' in page
    assert f'rel="o:exemplifies" href="{BASE}/omdoc/sets#union"' in page
    assert f'rel="o:defines" href="{BASE}/omdoc/sets#union"' in page
    assert f'prefix="o: {ONT} rdf:' in page
    # well-formed XML
    ET.fromstring(page.split("\n", 1)[1])


def test_document_typeof_counts_match_statements(golden_collection):
    ctx = context_for(golden_collection)
    for tid, theory in golden_collection.theories.items():
        page = render_document(theory, golden_collection, ctx, ONT)
        for kind, cls in (("definition", "Definition"), ("example", "Example"),
                          ("theorem", "Theorem"), ("axiom", "Axiom"),
                          ("proof", "Proof")):
            wanted = sum(1 for s in theory.statements if s.kind == kind)
            assert page.count(f'typeof="o:{cls}"') == wanted, (tid, kind)


def test_document_proof_steps(golden_collection):
    ctx = context_for(golden_collection)
    page = render_document(golden_collection.theories["combinat"],
                           golden_collection, ctx, ONT)
    assert page.count('typeof="o:ProofStep"') == 2
    assert f'about="{BASE}/omdoc/combinat#pf-1.1"' in page
    assert f'about="{BASE}/omdoc/combinat#pf-1.2"' in page
    assert 'rel="o:justifiedBy"' in page
    assert '<div class="step-head">' in page
    assert '<div class="step-body">' in page


def test_document_empty_theory():
    from lectures.model import Theory, TheoryCollection
    coll = TheoryCollection(BASE, {"bare": Theory("bare")})
    page = render_document(coll.theories["bare"], coll, context_for(coll), ONT)
    assert "<section" not in page.replace('<section class="statements">', "")
    ET.fromstring(page.split("\n", 1)[1])


def test_document_notation_variant(golden_collection):
    ctx = context_for(golden_collection, variant="fr")
    page = render_document(golden_collection.theories["combinat"],
                           golden_collection, ctx, ONT)
    assert "\U0001d49e" in page
    default_page = render_document(golden_collection.theories["combinat"],
                                   golden_collection, context_for(golden_collection), ONT)
    assert 'linethickness="0"' in default_page
