"""Canonical XML serialization of theory collections.

The vocabulary is a fixed OMDoc-inspired subset (see schema/omdoc.rnc):

    <omdoc xml:base>
      <theory xml:id>
        <imports from>
        <symbol name arity prec>
          <notation [variant]> <text>|<slot index min>|<join sep> </notation>
        <statement xml:id kind [for]>
          <p> | <OMOBJ> | <step index [just]>

Formulas use OpenMath-style elements: OMS cd/name, OMV name, OMI, OMA,
OMBIND (binder, OMBVAR, body).  `to_xml` output is byte-deterministic:
theories sorted by id, fixed attribute order, two-space indentation,
formulas and prose on single lines.
"""

import xml.etree.ElementTree as ET

from .errors import FormatError
from .model import (Apply, Bind, Formula, Int, ProseRun, Ref,
                    ResolvedProofStep, Statement, Sym, SymbolInfo, Theory,
                    TheoryCollection, Var, validate)
from .notation import FlexJoin, Literal, Slot

XML_NS = "http://www.w3.org/XML/1998/namespace"
_XML_ID = f"{{{XML_NS}}}id"
_XML_BASE = f"{{{XML_NS}}}base"


def _esc(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _attr(value):
    return _esc(str(value)).replace('"', "&quot;")


# ---------------------------------------------------------------------------
# Writing


def om_xml(obj, xref=None):
    """One-line OpenMath serialization of a formula tree.

    `xref(obj_path) -> id` optionally annotates nodes for parallel markup;
    paths are preorder indices.
    """
    counter = [0]

    def emit(node):
        idx = counter[0]
        counter[0] += 1
        ref = f' xref="{_attr(xref(idx))}"' if xref else ""
        if isinstance(node, Sym):
            return f'<OMS cd="{_attr(node.theory)}" name="{_attr(node.name)}"{ref}/>'
        if isinstance(node, Var):
            return f'<OMV name="{_attr(node.name)}"{ref}/>'
        if isinstance(node, Int):
            return f"<OMI{ref}>{node.value}</OMI>"
        if isinstance(node, Apply):
            inner = emit(node.head) + "".join(emit(a) for a in node.args)
            return f"<OMA{ref}>{inner}</OMA>"
        if isinstance(node, Bind):
            binder = emit(node.binder)
            vars_inner = "".join(emit(v) for v in node.vars)
            body = emit(node.body)
            return f"<OMBIND{ref}>{binder}<OMBVAR>{vars_inner}</OMBVAR>{body}</OMBIND>"
        raise TypeError(f"not a formula node: {node!r}")

    return emit(obj)


def _notation_xml(tokens):
    parts = []
    for tok in tokens:
        if isinstance(tok, Literal):
            parts.append(f"<text>{_esc(tok.text)}</text>")
        elif isinstance(tok, Slot):
            parts.append(f'<slot index="{tok.index}" min="{tok.min_prec}"/>')
        else:
            parts.append(f'<join sep="{_attr(" ".join(tok.separator))}"/>')
    return "".join(parts)


def _ref_attr(refs):
    return " ".join(str(r) for r in refs)


def _content_lines(items, pad):
    lines = []
    for item in items:
        if isinstance(item, ProseRun):
            lines.append(f"{pad}<p>{_esc(item.text)}</p>")
        else:
            lines.append(f"{pad}<OMOBJ>{om_xml(item.object)}</OMOBJ>")
    return lines


def theory_xml_lines(theory, indent=1):
    pad = "  " * indent
    p2, p3, p4 = pad + "  ", pad + "    ", pad + "      "
    lines = [f'{pad}<theory xml:id="{_attr(theory.id)}">']
    for imp in theory.imports:
        lines.append(f'{p2}<imports from="{_attr(imp)}"/>')
    for sym in theory.symbols:
        arity = "flex" if sym.arity is None else str(sym.arity)
        lines.append(f'{p2}<symbol name="{_attr(sym.name)}" arity="{arity}" '
                     f'prec="{sym.precedence}">')
        lines.append(f"{p3}<notation>{_notation_xml(sym.template)}</notation>")
        for key, tokens in sym.variants:
            lines.append(f'{p3}<notation variant="{_attr(key)}">'
                         f"{_notation_xml(tokens)}</notation>")
        lines.append(f"{p2}</symbol>")
    for st in theory.statements:
        attrs = f'xml:id="{_attr(st.id)}" kind="{_attr(st.kind)}"'
        if st.for_targets:
            attrs += f' for="{_attr(_ref_attr(st.for_targets))}"'
        if not st.content and not st.steps:
            lines.append(f"{p2}<statement {attrs}/>")
            continue
        lines.append(f"{p2}<statement {attrs}>")
        lines.extend(_content_lines(st.content, p3))
        for step in st.steps:
            sattrs = f'index="{step.index}"'
            if step.justification is not None:
                sattrs += f' just="{_attr(str(step.justification))}"'
            if step.content:
                lines.append(f"{p3}<step {sattrs}>")
                lines.extend(_content_lines(step.content, p4))
                lines.append(f"{p3}</step>")
            else:
                lines.append(f"{p3}<step {sattrs}/>")
        lines.append(f"{p2}</statement>")
    lines.append(f"{pad}</theory>")
    return lines


def to_xml(collection):
    """Serialize a collection; requires validate(collection) == []."""
    problems = validate(collection)
    if problems:
        raise ValueError(f"cannot serialize invalid collection: {problems[0].message}")
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    base = _attr(collection.base_uri)
    if not collection.theories:
        lines.append(f'<omdoc xml:base="{base}"/>')
    else:
        lines.append(f'<omdoc xml:base="{base}">')
        for tid in sorted(collection.theories):
            lines.extend(theory_xml_lines(collection.theories[tid]))
        lines.append("</omdoc>")
    return "\n".join(lines) + "\n"


def theory_projection_xml(collection, theory_id):
    """Single-theory OMDoc document (what the server serves per theory).

    A projection of the full collection: its imports may reference theories
    outside the document, so it is not necessarily independently valid.
    """
    theory = collection.theories[theory_id]
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<omdoc xml:base="{_attr(collection.base_uri)}">']
    lines.extend(theory_xml_lines(theory))
    lines.append("</omdoc>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Reading


def om_from_element(elem):
    """Rebuild a formula tree from an OpenMath element (xref attrs ignored)."""
    tag = elem.tag
    if tag == "OMS":
        return Sym(_need(elem, "cd"), _need(elem, "name"))
    if tag == "OMV":
        return Var(_need(elem, "name"))
    if tag == "OMI":
        text = (elem.text or "").strip()
        try:
            return Int(int(text))
        except ValueError:
            raise FormatError(f"OMI holds non-integer text {text!r}") from None
    if tag == "OMA":
        children = list(elem)
        if not children:
            raise FormatError("OMA with no children")
        return Apply(om_from_element(children[0]),
                     tuple(om_from_element(c) for c in children[1:]))
    if tag == "OMBIND":
        children = list(elem)
        if len(children) != 3 or children[1].tag != "OMBVAR":
            raise FormatError("OMBIND needs binder, OMBVAR, body")
        vars_ = []
        for v in children[1]:
            if v.tag != "OMV":
                raise FormatError(f"OMBVAR holds non-variable element <{v.tag}>")
            vars_.append(Var(_need(v, "name")))
        if not vars_:
            raise FormatError("OMBVAR with no variables")
        return Bind(om_from_element(children[0]), tuple(vars_),
                    om_from_element(children[2]))
    raise FormatError(f"unknown formula element <{tag}>")


def _need(elem, attr):
    value = elem.get(attr)
    if value is None:
        raise FormatError(f"<{elem.tag}> missing required attribute '{attr}'")
    return value


def _parse_ref(text):
    theory, sep, fragment = text.partition("#")
    if not sep or not theory or not fragment:
        raise FormatError(f"malformed reference {text!r} (want theory#fragment)")
    return Ref(theory, fragment)


def _parse_notation(elem):
    tokens = []
    for child in elem:
        if child.tag == "text":
            tokens.append(Literal(child.text or ""))
        elif child.tag == "slot":
            try:
                index = int(_need(child, "index"))
                min_prec = int(_need(child, "min"))
            except ValueError:
                raise FormatError("slot index/min must be integers") from None
            tokens.append(Slot(index, min_prec))
        elif child.tag == "join":
            sep = tuple(_need(child, "sep").split())
            if not sep:
                raise FormatError("join with empty separator")
            tokens.append(FlexJoin(sep))
        else:
            raise FormatError(f"unknown notation element <{child.tag}>")
    return tuple(tokens)


def _parse_content(children, what):
    content = []
    for child in children:
        if child.tag == "p":
            content.append(ProseRun(child.text or ""))
        elif child.tag == "OMOBJ":
            inner = list(child)
            if len(inner) != 1:
                raise FormatError("OMOBJ must hold exactly one formula")
            content.append(Formula(om_from_element(inner[0])))
        else:
            raise FormatError(f"unknown element <{child.tag}> in {what}")
    return tuple(content)


def _parse_symbol(elem):
    name = _need(elem, "name")
    arity_text = _need(elem, "arity")
    if arity_text == "flex":
        arity = None
    else:
        try:
            arity = int(arity_text)
        except ValueError:
            raise FormatError(f"bad arity {arity_text!r}") from None
    try:
        prec = int(_need(elem, "prec"))
    except ValueError:
        raise FormatError("symbol prec must be an integer") from None
    default = None
    variants = []
    for child in elem:
        if child.tag != "notation":
            raise FormatError(f"unknown element <{child.tag}> in symbol")
        tokens = _parse_notation(child)
        key = child.get("variant")
        if key is None:
            if default is not None:
                raise FormatError(f"symbol '{name}' has two default notations")
            default = tokens
        else:
            variants.append((key, tokens))
    if default is None:
        raise FormatError(f"symbol '{name}' lacks a default notation")
    return SymbolInfo(name, arity, prec, default, tuple(variants))


def _parse_statement(elem):
    sid = elem.get(_XML_ID)
    if sid is None:
        raise FormatError("<statement> missing xml:id")
    kind = _need(elem, "kind")
    for_attr = elem.get("for", "")
    for_targets = tuple(_parse_ref(part) for part in for_attr.split())
    content = []
    steps = []
    for child in elem:
        if child.tag == "step":
            try:
                index = int(_need(child, "index"))
            except ValueError:
                raise FormatError("step index must be an integer") from None
            if index != len(steps) + 1:
                raise FormatError(f"step index {index} out of order in '{sid}'")
            just_attr = child.get("just")
            just = _parse_ref(just_attr) if just_attr is not None else None
            steps.append(ResolvedProofStep(index, _parse_content(list(child), "step"), just))
        elif child.tag in ("p", "OMOBJ"):
            if steps:
                raise FormatError(f"content after steps in statement '{sid}'")
            content.extend(_parse_content([child], "statement"))
        else:
            raise FormatError(f"unknown element <{child.tag}> in statement")
    return Statement(sid, kind, for_targets, tuple(content), tuple(steps))


def from_xml(text):
    """Parse canonical OMDoc XML back into a TheoryCollection.

    Raises FormatError on unknown elements, missing required attributes, or
    structurally impossible formulas.  Semantic problems (dangling refs,
    arity mismatches) are left to validate().
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as e:
        raise FormatError(f"not well-formed XML: {e}") from e
    if root.tag != "omdoc":
        raise FormatError(f"expected <omdoc> root, found <{root.tag}>")
    base = root.get(_XML_BASE)
    if base is None:
        raise FormatError("<omdoc> missing xml:base")
    theories = {}
    for telem in root:
        if telem.tag != "theory":
            raise FormatError(f"unknown element <{telem.tag}> in omdoc")
        tid = telem.get(_XML_ID)
        if tid is None:
            raise FormatError("<theory> missing xml:id")
        if tid in theories:
            raise FormatError(f"duplicate theory id '{tid}'")
        imports = []
        symbols = []
        statements = []
        for child in telem:
            if child.tag == "imports":
                imports.append(_need(child, "from"))
            elif child.tag == "symbol":
                symbols.append(_parse_symbol(child))
            elif child.tag == "statement":
                statements.append(_parse_statement(child))
            else:
                raise FormatError(f"unknown element <{child.tag}> in theory")
        theories[tid] = Theory(tid, tuple(imports), tuple(symbols), tuple(statements))
    return TheoryCollection(base, theories)
