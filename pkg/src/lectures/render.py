"""Presentation MathML with parallel markup, plus XHTML+RDFa pages.

Every formula renders as

    <math><semantics>
      {presentation}
      <annotation-xml encoding="OpenMath"><OMOBJ>{content}</OMOBJ></annotation-xml>
    </semantics></math>

where presentation nodes carry `id` attributes and content nodes carry
`xref` attributes pointing back at them, one-to-one.  Ids follow
`f{formula-ordinal}.{preorder-index}` over the object tree.

Brackets appear exactly when a child's effective precedence is lower than
its slot's required precedence; flexary operand slots require the symbol's
own precedence.  `linearize` applies the same rules to produce re-parseable
ASCII (falling back to macro-call form where the template would be lossy,
e.g. a flexary symbol applied to a single operand).
"""

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .errors import MissingNotation
from .model import (Apply, Bind, Formula, Int, ProseRun, Sym, Var,
                    looks_generated, ref_uri, statement_uri, step_uri,
                    symbol_uri, theory_uri)
from .notation import ATOM_PREC, FlexJoin, Literal, Slot, TEX_UNICODE, mathcal_char

MATHML_NS = "http://www.w3.org/1998/Math/MathML"
XHTML_NS = "http://www.w3.org/1999/xhtml"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

# template literals the layout pass interprets structurally
_STRUCTURAL_LITS = {"{", "}", "^", "_", "\\atop", "\\mathcal"}


@dataclass(frozen=True)
class NotationEntry:
    arity: int | None
    precedence: int
    template: tuple
    variants: tuple = ()  # of (key, tokens)

    def tokens_for(self, variant):
        if variant is not None:
            for key, tokens in self.variants:
                if key == variant:
                    return tokens
        return self.template


@dataclass
class RenderContext:
    base_uri: str
    notations: dict  # (theory, name) -> NotationEntry
    variant: str | None = None
    ambient: int = 0

    def with_variant(self, variant):
        return RenderContext(self.base_uri, self.notations, variant, self.ambient)


def context_for(collection, variant=None):
    """RenderContext over every symbol of a collection."""
    notations = {}
    for tid, theory in collection.theories.items():
        for sym in theory.symbols:
            notations[(tid, sym.name)] = NotationEntry(
                sym.arity, sym.precedence, sym.template, sym.variants)
    return RenderContext(collection.base_uri, notations, variant)


@dataclass
class RenderedFormula:
    math: ET.Element  # whole <math> element
    presentation: ET.Element
    content: ET.Element  # <OMOBJ>
    xref: dict = field(default_factory=dict)  # presentation id -> content element

    def to_string(self):
        return ET.tostring(self.math, encoding="unicode")


def _entry(ctx, sym):
    entry = ctx.notations.get((sym.theory, sym.name))
    if entry is None:
        raise MissingNotation(symbol_uri(ctx.base_uri, sym.theory, sym.name))
    return entry


def _template_renderable(entry, variant, nargs):
    """Template path applies: arity fits and a literal can host the head id."""
    tokens = entry.tokens_for(variant)
    if entry.arity is None:
        if nargs < 2:
            return None
        join = next(t for t in tokens if isinstance(t, FlexJoin))
        hosts = [x for x in join.separator if x not in _STRUCTURAL_LITS]
        hosts += [t.text for t in tokens if isinstance(t, Literal)
                  and t.text not in _STRUCTURAL_LITS]
        return tokens if hosts else None
    if entry.arity != nargs or entry.arity == 0:
        return None
    hosts = [t.text for t in tokens if isinstance(t, Literal)
             and t.text not in _STRUCTURAL_LITS]
    return tokens if hosts else None


def eff_prec(obj, ctx):
    """Effective precedence: what the bracketing rule compares against."""
    if isinstance(obj, (Var, Int)):
        return ATOM_PREC
    if isinstance(obj, Sym):
        return _entry(ctx, obj).precedence
    if isinstance(obj, Bind):
        return 0
    if isinstance(obj, Apply):
        if isinstance(obj.head, Sym):
            entry = _entry(ctx, obj.head)
            if _template_renderable(entry, ctx.variant, len(obj.args)):
                return entry.precedence
        return ATOM_PREC  # function-style rendering is self-delimiting
    raise TypeError(f"not a formula node: {obj!r}")


# ---------------------------------------------------------------------------
# Presentation layout

def _el(tag, text=None, **attrs):
    e = ET.Element(tag)
    for k, v in attrs.items():
        e.set(k, v)
    if text is not None:
        e.text = text
    return e


def _token_element(text):
    if text.startswith("\\"):
        mapped = TEX_UNICODE.get(text)
        return _el("mo", mapped) if mapped else _el("mi", text[1:])
    if text.isdigit():
        return _el("mn", text)
    if text.isalpha():
        return _el("mi", text)
    return _el("mo", text)


def _layout(items, head_id):
    """Turn a mixed token/element stream into MathML boxes.

    items: ("lit", text) | ("elem", element).  Structural literals combine
    neighbours: `{...}` groups, `^`/`_` scripts, `\\atop` zero-line fractions,
    `\\mathcal` script letters.  The first element produced from a literal
    receives `head_id` (the presentation anchor of the applied symbol).
    """
    # brace grouping, innermost-out
    def group(seq):
        out = []
        for item in seq:
            if item == ("lit", "}"):
                inner = []
                while out and out[-1] != ("lit", "{"):
                    inner.append(out.pop())
                if not out:
                    raise ValueError("unbalanced template braces")
                out.pop()
                inner.reverse()
                boxes = combine(inner)
                if len(boxes) == 1:
                    out.append(("elem", boxes[0]))
                else:
                    row = _el("mrow")
                    row.extend(boxes)
                    out.append(("elem", row))
            else:
                out.append(item)
        return out

    placed = [False]

    def to_elem(item):
        if item[0] == "elem":
            return item[1]
        e = _token_element(item[1])
        if not placed[0] and head_id is not None:
            e.set("id", head_id)
            placed[0] = True
        return e

    def combine(seq):
        boxes = []
        i = 0
        while i < len(seq):
            item = seq[i]
            if item[0] == "lit" and item[1] in ("^", "_", "\\atop"):
                if not boxes or i + 1 >= len(seq):
                    raise ValueError(f"misplaced '{item[1]}' in template")
                base = boxes.pop()
                script = to_elem(seq[i + 1])
                boxes.append(_combine_script(item[1], base, script))
                i += 2
            elif item[0] == "lit" and item[1] == "\\mathcal":
                if i + 1 >= len(seq):
                    raise ValueError("\\mathcal without an argument")
                arg = to_elem(seq[i + 1])
                if arg.tag == "mi" and arg.text and len(arg.text) == 1:
                    arg.text = mathcal_char(arg.text)
                boxes.append(arg)
                i += 2
            else:
                boxes.append(to_elem(item))
                i += 1
        return boxes

    return combine(group(list(items)))


def _combine_script(op, base, script):
    if op == "\\atop":
        frac = _el("mfrac", linethickness="0")
        frac.extend([base, script])
        return frac
    if base.tag == "msub" and op == "^":
        subsup = _el("msubsup")
        subsup.extend([base[0], base[1], script])
        return subsup
    if base.tag == "msup" and op == "_":
        subsup = _el("msubsup")
        subsup.extend([base[0], script, base[1]])
        return subsup
    combo = _el("msup" if op == "^" else "msub")
    combo.extend([base, script])
    return combo


# ---------------------------------------------------------------------------
# Parallel rendering (presentation + content in one traversal)


class _State:
    def __init__(self, ordinal):
        self.ordinal = ordinal
        self.counter = 0
        self.xref = {}

    def next_id(self):
        pid = f"f{self.ordinal}.{self.counter}"
        self.counter += 1
        return pid


def _bracket(elem, child_prec, required):
    if child_prec >= required:
        return elem
    row = _el("mrow")
    row.append(_el("mo", "("))
    row.append(elem)
    row.append(_el("mo", ")"))
    return row


def _content(state, pid, tag, **attrs):
    e = _el(tag, **attrs)
    e.set("xref", pid)
    state.xref[pid] = e
    return e


def _render(obj, required, ctx, state):
    """Returns (presentation element, content element); presentation already
    bracketed for `required`."""
    pid = state.next_id()
    if isinstance(obj, Var):
        pres = _el("mi", obj.name, id=pid)
        return _bracket(pres, ATOM_PREC, required), _content(state, pid, "OMV", name=obj.name)
    if isinstance(obj, Int):
        return _render_int(obj, pid, required, state)
    if isinstance(obj, Sym):
        return _render_sym_leaf(obj, pid, required, ctx, state)
    if isinstance(obj, Apply):
        return _render_apply(obj, pid, required, ctx, state)
    if isinstance(obj, Bind):
        return _render_bind(obj, pid, required, ctx, state)
    raise TypeError(f"not a formula node: {obj!r}")


def _render_int(obj, pid, required, state):
    pres = _el("mn", str(obj.value), id=pid)
    content = _content(state, pid, "OMI")
    content.text = str(obj.value)
    return _bracket(pres, ATOM_PREC, required), content


def _render_sym_leaf(obj, pid, required, ctx, state):
    entry = _entry(ctx, obj)
    content = _content(state, pid, "OMS", cd=obj.theory, name=obj.name)
    if entry.arity == 0:
        tokens = entry.tokens_for(ctx.variant)
        boxes = _layout([("lit", t.text) for t in tokens], head_id=None)
        if len(boxes) == 1:
            pres = boxes[0]
        else:
            pres = _el("mrow")
            pres.extend(boxes)
        pres.set("id", pid)
    else:
        pres = _el("mi", obj.name, id=pid)  # unapplied operator
    return _bracket(pres, entry.precedence, required), content


def _render_apply(obj, pid, required, ctx, state):
    if isinstance(obj.head, Sym):
        entry = _entry(ctx, obj.head)
        tokens = _template_renderable(entry, ctx.variant, len(obj.args))
        if tokens is not None:
            return _render_apply_template(obj, pid, entry, tokens, required, ctx, state)
    return _render_apply_functional(obj, pid, required, ctx, state)


def _render_apply_template(obj, pid, entry, tokens, required, ctx, state):
    head_pid = state.next_id()
    head_content = _content(state, head_pid, "OMS", cd=obj.head.theory, name=obj.head.name)
    # children render in semantic order so preorder ids line up
    slot_prec = {t.index: t.min_prec for t in tokens if isinstance(t, Slot)}
    arg_pres = []
    arg_content = []
    for i, arg in enumerate(obj.args, start=1):
        p, c = _render(arg, slot_prec.get(i, entry.precedence), ctx, state)
        arg_pres.append(p)
        arg_content.append(c)
    items = []
    for tok in tokens:
        if isinstance(tok, Literal):
            items.append(("lit", tok.text))
        elif isinstance(tok, Slot):
            items.append(("elem", arg_pres[tok.index - 1]))
        else:  # flexary join
            for j, p in enumerate(arg_pres):
                if j:
                    items.extend(("lit", s) for s in tok.separator)
                items.append(("elem", p))
    boxes = _layout(items, head_id=head_pid)
    pres = _el("mrow", id=pid)
    pres.extend(boxes)
    content = _content(state, pid, "OMA")
    content.append(head_content)
    content.extend(arg_content)
    return _bracket(pres, entry.precedence, required), content


def _render_apply_functional(obj, pid, required, ctx, state):
    head_pres, head_content = _render(obj.head, ATOM_PREC + 1, ctx, state)
    pres = _el("mrow", id=pid)
    pres.append(head_pres)
    pres.append(_el("mo", "⁡"))  # function application
    pres.append(_el("mo", "("))
    content = _content(state, pid, "OMA")
    content.append(head_content)
    for i, arg in enumerate(obj.args):
        if i:
            pres.append(_el("mo", ","))
        p, c = _render(arg, 0, ctx, state)
        pres.append(p)
        content.append(c)
    pres.append(_el("mo", ")"))
    return _bracket(pres, ATOM_PREC, required), content


def _render_bind(obj, pid, required, ctx, state):
    binder_pres, binder_content = _render(obj.binder, 0, ctx, state)
    pres = _el("mrow", id=pid)
    pres.append(binder_pres)
    content = _content(state, pid, "OMBIND")
    content.append(binder_content)
    bvar = _el("OMBVAR")
    content.append(bvar)
    for i, v in enumerate(obj.vars):
        if i:
            pres.append(_el("mo", ","))
        p, c = _render(v, 0, ctx, state)
        pres.append(p)
        bvar.append(c)
    pres.append(_el("mo", "."))
    body_pres, body_content = _render(obj.body, 0, ctx, state)
    pres.append(body_pres)
    content.append(body_content)
    return _bracket(pres, 0, required), content


def render_object(obj, ctx, ordinal=0):
    """Render one MathObject as parallel markup.

    Raises MissingNotation when a symbol has no entry in the context.
    """
    state = _State(ordinal)
    pres, content = _render(obj, ctx.ambient, ctx, state)
    omobj = _el("OMOBJ")
    omobj.append(content)
    math = _el("math", xmlns=MATHML_NS)
    semantics = _el("semantics")
    math.append(semantics)
    semantics.append(pres)
    ann = _el("annotation-xml", encoding="OpenMath")
    ann.append(omobj)
    semantics.append(ann)
    return RenderedFormula(math, pres, omobj, state.xref)


# ---------------------------------------------------------------------------
# Linearization


def linearize(obj, ctx):
    """Deterministic ASCII form under the same precedence/bracketing rules.

    parse_math over the same scope reproduces the object for anything the
    surface grammar can express.
    """
    return _join(_lin(obj, ctx.ambient, ctx))


def _lin(obj, required, ctx):
    if isinstance(obj, Var):
        return [obj.name]
    if isinstance(obj, Int):
        return [str(obj.value)]
    if isinstance(obj, Sym):
        entry = _entry(ctx, obj)
        toks = ([t.text for t in entry.tokens_for(ctx.variant)]
                if entry.arity == 0 else [f"\\{obj.name}"])
        return _wrap(toks, entry.precedence, required)
    if isinstance(obj, Apply):
        return _lin_apply(obj, required, ctx)
    if isinstance(obj, Bind):
        toks = _lin(obj.binder, 0, ctx)
        for i, v in enumerate(obj.vars):
            if i:
                toks.append(",")
            toks.append(v.name)
        toks.append(".")
        toks.extend(_lin(obj.body, 0, ctx))
        return _wrap(toks, 0, required)
    raise TypeError(f"not a formula node: {obj!r}")


def _lin_apply(obj, required, ctx):
    if isinstance(obj.head, Sym):
        entry = _entry(ctx, obj.head)
        tokens = _template_renderable(entry, ctx.variant, len(obj.args))
        if tokens is not None:
            out = []
            for tok in tokens:
                if isinstance(tok, Literal):
                    out.append(tok.text)
                elif isinstance(tok, Slot):
                    out.extend(_lin(obj.args[tok.index - 1], tok.min_prec, ctx))
                else:
                    for j, arg in enumerate(obj.args):
                        if j:
                            out.extend(tok.separator)
                        out.extend(_lin(arg, entry.precedence, ctx))
            return _wrap(out, entry.precedence, required)
        # macro-call fallback (covers 1-operand flexary)
        out = [f"\\{obj.head.name}", "{"]
        for j, arg in enumerate(obj.args):
            if j:
                out.append(",")
            out.extend(_lin(arg, 0, ctx))
        out.append("}")
        return out
    out = _lin(obj.head, ATOM_PREC + 1, ctx)
    out.append("(")
    for j, arg in enumerate(obj.args):
        if j:
            out.append(",")
        out.extend(_lin(arg, 0, ctx))
    out.append(")")
    return out


def _wrap(tokens, child_prec, required):
    if child_prec < required:
        return ["(", *tokens, ")"]
    return tokens


def _join(tokens):
    out = []
    for i, tok in enumerate(tokens):
        if i:
            prev = tokens[i - 1]
            tight = (prev in ("(", "{", ",", "^", "_") or
                     tok in (")", "}", ",", "{", "^", "_"))
            if not tight:
                out.append(" ")
        out.append(tok)
    return "".join(out)


# ---------------------------------------------------------------------------
# XHTML + RDFa pages


_KIND_CLASS = {"definition": "Definition", "example": "Example",
               "theorem": "Theorem", "axiom": "Axiom", "proof": "Proof"}
_KIND_REL = {"definition": "o:defines", "example": "o:exemplifies", "proof": "o:proves"}


def _esc(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _attr(text):
    return _esc(text).replace('"', "&quot;")


class _Page:
    def __init__(self):
        self.lines = []
        self.ordinal = 0

    def add(self, line):
        self.lines.append(line)


def _content_html(items, ctx, page, css):
    parts = []
    for item in items:
        if isinstance(item, ProseRun):
            parts.append(_esc(item.text))
        else:
            rendered = render_object(item.object, ctx, ordinal=page.ordinal)
            page.ordinal += 1
            parts.append(rendered.to_string())
    page.add(f'<div class="{css}">{"".join(parts)}</div>')


def render_document(theory, collection, ctx, ontology_ns):
    """One theory as an XHTML+RDFa page (content type application/xhtml+xml)."""
    base = collection.base_uri
    turi = theory_uri(base, theory.id)
    page = _Page()
    page.add('<?xml version="1.0" encoding="UTF-8"?>')
    page.add(f'<html xmlns="{XHTML_NS}" prefix="o: {_attr(ontology_ns)} rdf: {RDF_NS}">')
    page.add("<head>")
    page.add('<meta charset="utf-8"/>')
    page.add(f"<title>{_esc(theory.id)}</title>")
    page.add('<link rel="stylesheet" href="/static/jobad.css"/>')
    page.add('<script type="module" src="/static/jobad.js"></script>')
    page.add("</head>")
    page.add(f'<body about="{_attr(turi)}" typeof="o:Theory">')
    page.add(f"<h1>Theory {_esc(theory.id)}</h1>")
    if theory.imports:
        links = ", ".join(
            f'<a rel="o:imports" href="{_attr(theory_uri(base, imp))}">{_esc(imp)}</a>'
            for imp in theory.imports)
        page.add(f'<nav class="imports">Imports: {links}</nav>')
    if theory.symbols:
        page.add('<section class="symbols"><h2>Symbols</h2>')
        for sym in theory.symbols:
            suri = symbol_uri(base, theory.id, sym.name)
            arity = "flexary" if sym.arity is None else f"arity {sym.arity}"
            page.add(f'<div rel="o:declares">'
                     f'<section class="symbol" about="{_attr(suri)}" typeof="o:Symbol" '
                     f'id="sym-{_attr(sym.name)}">'
                     f"<h3>{_esc(sym.name)}</h3>"
                     f'<p class="symbol-meta">{arity}, precedence {sym.precedence}</p>'
                     f"</section></div>")
        page.add("</section>")
    page.add('<section class="statements">')
    for st in theory.statements:
        _statement_html(st, theory, collection, ctx, page)
    page.add("</section>")
    page.add("</body>")
    page.add("</html>")
    return "\n".join(page.lines) + "\n"


def _statement_html(st, theory, collection, ctx, page):
    base = collection.base_uri
    suri = statement_uri(base, theory.id, st.id)
    kind_class = _KIND_CLASS[st.kind]
    page.add(f'<section class="statement {st.kind}" about="{_attr(suri)}" '
             f'typeof="o:{kind_class}" id="{_attr(st.id)}">')
    title_prop = ' property="o:title"' if not looks_generated(st) else ""
    page.add(f"<h3{title_prop}>{kind_class} {_esc(st.id)}</h3>")
    if st.for_targets:
        rel = _KIND_REL.get(st.kind)
        rel_attr = f' rel="{rel}"' if rel else ""
        links = ", ".join(
            f'<a{rel_attr} href="{_attr(ref_uri(base, ref))}">{_esc(str(ref))}</a>'
            for ref in st.for_targets)
        page.add(f'<p class="for-targets">for {links}</p>')
    if st.content:
        _content_html(st.content, ctx, page, "statement-body")
    if st.steps:
        page.add('<div class="proof-steps">')
        for step in st.steps:
            sturi = step_uri(base, theory.id, st.id, step.index)
            page.add(f'<div class="proof-step" about="{_attr(sturi)}" '
                     f'typeof="o:ProofStep" id="{_attr(st.id)}.{step.index}">')
            head = f"Step {step.index}"
            if step.justification is not None:
                juri = ref_uri(base, step.justification)
                head += (f' <a rel="o:justifiedBy" href="{_attr(juri)}">'
                         f"by {_esc(str(step.justification))}</a>")
            page.add(f'<div class="step-head">{head}</div>')
            _content_html(step.content, ctx, page, "step-body")
            page.add("</div>")
        page.add("</div>")
    page.add("</section>")
