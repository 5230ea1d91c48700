"""Semantic document model: theories, statements, formula trees, validation.

Everything here is an immutable value; validation returns violation data
rather than raising.  URIs for all entities come from the scheme below:

    theory      {base}/omdoc/{theory-id}
    symbol      {theory-uri}#{name}
    statement   {theory-uri}#{statement-id}
    proof step  {theory-uri}#{proof-id}.{step-index}

Identifiers match [A-Za-z][A-Za-z0-9-]* (no dots), which keeps the scheme
injective within one collection.
"""

import re
from dataclasses import dataclass, field

from .notation import template_arity

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9-]*\Z")


def looks_generated(statement):
    """Whether a statement id has the `{kind}-{ordinal}` generated shape."""
    return re.fullmatch(rf"{statement.kind}-[1-9][0-9]*", statement.id) is not None

STATEMENT_KINDS = ("definition", "example", "theorem", "axiom", "proof")

# Violation codes (closed enum).
DANGLING_REF = "DanglingRef"
ARITY_MISMATCH = "ArityMismatch"
CYCLIC_IMPORT = "CyclicImport"
DUPLICATE_ID = "DuplicateId"
PROOF_WITHOUT_THEOREM = "ProofWithoutTheorem"


# ---------------------------------------------------------------------------
# Formula trees (OpenMath-style objects)

@dataclass(frozen=True)
class Sym:
    theory: str
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Apply:
    head: "MathObject"
    args: tuple  # of MathObject, non-empty


@dataclass(frozen=True)
class Bind:
    binder: "MathObject"
    vars: tuple  # of Var, non-empty, distinct names
    body: "MathObject"


MathObject = Sym | Var | Int | Apply | Bind


def walk(obj):
    """Preorder traversal of a formula tree."""
    yield obj
    if isinstance(obj, Apply):
        yield from walk(obj.head)
        for a in obj.args:
            yield from walk(a)
    elif isinstance(obj, Bind):
        yield from walk(obj.binder)
        for v in obj.vars:
            yield from walk(v)
        yield from walk(obj.body)


def symbols_in(obj):
    """Distinct Sym leaves of a formula tree."""
    return {node for node in walk(obj) if isinstance(node, Sym)}


# ---------------------------------------------------------------------------
# Document structure

@dataclass(frozen=True)
class ProseRun:
    text: str


@dataclass(frozen=True)
class Formula:
    object: MathObject


@dataclass(frozen=True)
class Ref:
    """Resolved reference to a symbol or statement: theory id + fragment."""

    theory: str
    fragment: str

    def __str__(self):
        return f"{self.theory}#{self.fragment}"


@dataclass(frozen=True)
class ResolvedProofStep:
    index: int  # 1-based, contiguous
    content: tuple  # of ProseRun | Formula
    justification: Ref | None = None


@dataclass(frozen=True)
class Statement:
    id: str
    kind: str  # one of STATEMENT_KINDS
    for_targets: tuple = ()  # of Ref
    content: tuple = ()  # of ProseRun | Formula
    steps: tuple = ()  # of ResolvedProofStep (proofs only)


@dataclass(frozen=True)
class SymbolInfo:
    name: str
    arity: int | None  # None = flexary
    precedence: int
    template: tuple  # notation tokens
    variants: tuple = ()  # of (variant-key, tokens), sorted by key


@dataclass(frozen=True)
class Theory:
    id: str
    imports: tuple = ()  # of theory ids, in source order
    symbols: tuple = ()  # of SymbolInfo, in source order
    statements: tuple = ()  # of Statement, in source order


@dataclass
class TheoryCollection:
    base_uri: str
    theories: dict  # id -> Theory, insertion-ordered
    warnings: list = field(default_factory=list, compare=False)


# ---------------------------------------------------------------------------
# URI scheme

def _base(base_uri):
    return base_uri.rstrip("/")


def theory_uri(base_uri, theory_id):
    return f"{_base(base_uri)}/omdoc/{theory_id}"


def symbol_uri(base_uri, theory_id, name):
    return f"{theory_uri(base_uri, theory_id)}#{name}"


def statement_uri(base_uri, theory_id, statement_id):
    return f"{theory_uri(base_uri, theory_id)}#{statement_id}"


def step_uri(base_uri, theory_id, proof_id, index):
    return f"{theory_uri(base_uri, theory_id)}#{proof_id}.{index}"


def ref_uri(base_uri, ref):
    return f"{theory_uri(base_uri, ref.theory)}#{ref.fragment}"


def uri_for(entity, base_uri):
    """URI of a (kind, ...) entity descriptor.

    Accepted shapes: ("theory", tid), ("symbol", tid, name),
    ("statement", tid, sid), ("step", tid, proof_id, index).
    """
    kind = entity[0]
    if kind == "theory":
        return theory_uri(base_uri, entity[1])
    if kind == "symbol":
        return symbol_uri(base_uri, entity[1], entity[2])
    if kind == "statement":
        return statement_uri(base_uri, entity[1], entity[2])
    if kind == "step":
        return step_uri(base_uri, entity[1], entity[2], entity[3])
    raise ValueError(f"unknown entity kind {kind!r}")


def entities(collection):
    """All addressable entities of a collection, as uri_for descriptors."""
    for tid, theory in collection.theories.items():
        yield ("theory", tid)
        for sym in theory.symbols:
            yield ("symbol", tid, sym.name)
        for st in theory.statements:
            yield ("statement", tid, st.id)
            for step in st.steps:
                yield ("step", tid, st.id, step.index)


# ---------------------------------------------------------------------------
# Validation

@dataclass(frozen=True)
class Violation:
    code: str
    subject: str  # URI
    message: str


def _fragments(theory):
    """Names addressable as {theory}#{fragment}: symbols and statement ids."""
    frags = {s.name for s in theory.symbols}
    frags.update(st.id for st in theory.statements)
    return frags


def validate(collection):
    """Check every model invariant; return violations sorted by (subject, code).

    Pure and idempotent: violations are data, not errors.
    """
    out = []
    base = collection.base_uri
    theories = collection.theories

    # Import edges and cycles (one violation per strongly connected component,
    # anchored at its lexicographically least member).
    for tid, theory in theories.items():
        for imp in theory.imports:
            if imp not in theories:
                out.append(Violation(DANGLING_REF, theory_uri(base, tid),
                                     f"import of missing theory '{imp}'"))
    for scc in _cyclic_sccs(theories):
        anchor = min(scc)
        out.append(Violation(CYCLIC_IMPORT, theory_uri(base, anchor),
                             "import cycle: " + " -> ".join(sorted(scc))))

    for tid, theory in theories.items():
        seen = {}
        for sym in theory.symbols:
            uri = symbol_uri(base, tid, sym.name)
            if sym.name in seen:
                out.append(Violation(DUPLICATE_ID, uri, f"duplicate symbol '{sym.name}'"))
            seen[sym.name] = "symbol"
            for label, tokens in (("default", sym.template), *sym.variants):
                try:
                    declared = template_arity(tokens)
                except ValueError as e:
                    out.append(Violation(ARITY_MISMATCH, uri, f"{label} notation: {e}"))
                    continue
                if declared != sym.arity:
                    out.append(Violation(ARITY_MISMATCH, uri,
                                         f"{label} notation disagrees with declared arity"))
        theorem_ids = {st.id for st in theory.statements if st.kind == "theorem"}
        for st in theory.statements:
            uri = statement_uri(base, tid, st.id)
            if st.id in seen:
                kind = seen[st.id]
                out.append(Violation(DUPLICATE_ID, uri,
                                     f"statement id '{st.id}' collides with a {kind}"))
            seen[st.id] = "statement"
            if st.kind not in STATEMENT_KINDS:
                out.append(Violation(DANGLING_REF, uri, f"unknown statement kind '{st.kind}'"))
                continue
            out.extend(_check_targets(collection, tid, st, theorem_ids))
            for item in st.content:
                if isinstance(item, Formula):
                    out.extend(_check_formula(collection, uri, item.object))
            if st.steps and st.kind != "proof":
                out.append(Violation(PROOF_WITHOUT_THEOREM, uri,
                                     f"{st.kind} statement carries proof steps"))
            for i, step in enumerate(st.steps, start=1):
                suri = step_uri(base, tid, st.id, step.index)
                if step.index != i:
                    out.append(Violation(DUPLICATE_ID, suri,
                                         f"step indices not contiguous (expected {i})"))
                if step.justification is not None:
                    out.extend(_check_ref(collection, suri, step.justification))
                for item in step.content:
                    if isinstance(item, Formula):
                        out.extend(_check_formula(collection, suri, item.object))

    out.sort(key=lambda v: (v.subject, v.code, v.message))
    return out


def _cyclic_sccs(theories):
    """Non-trivial strongly connected components of the import graph."""
    index = {}
    low = {}
    stack = []
    on_stack = set()
    sccs = []
    counter = [0]

    def strongconnect(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in theories[v].imports:
            if w not in theories:
                continue
            if w not in index:
                strongconnect(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.add(w)
                if w == v:
                    break
            if len(comp) > 1 or v in theories[v].imports:
                sccs.append(comp)

    for v in sorted(theories):
        if v not in index:
            strongconnect(v)
    return sccs


def _resolve_ref(collection, ref):
    """What a Ref points at: 'symbol', 'statement' (with kind), or None."""
    theory = collection.theories.get(ref.theory)
    if theory is None:
        return None
    for sym in theory.symbols:
        if sym.name == ref.fragment:
            return ("symbol", None)
    for st in theory.statements:
        if st.id == ref.fragment:
            return ("statement", st.kind)
    return None


def _check_ref(collection, subject_uri, ref):
    if _resolve_ref(collection, ref) is None:
        return [Violation(DANGLING_REF, subject_uri, f"unresolved reference '{ref}'")]
    return []


def _check_targets(collection, tid, st, theorem_ids):
    out = []
    base = collection.base_uri
    uri = statement_uri(base, tid, st.id)
    resolved = []
    for ref in st.for_targets:
        hit = _resolve_ref(collection, ref)
        if hit is None:
            out.append(Violation(DANGLING_REF, uri, f"unresolved for-target '{ref}'"))
        else:
            resolved.append((ref, hit))
    if st.kind == "definition":
        if not st.for_targets:
            out.append(Violation(DANGLING_REF, uri, "definition without a defined symbol"))
        for ref, hit in resolved:
            if hit[0] != "symbol":
                out.append(Violation(DANGLING_REF, uri,
                                     f"definition target '{ref}' is not a symbol"))
    if st.kind == "proof":
        theorems = [ref for ref, hit in resolved if hit == ("statement", "theorem")]
        if not theorems:
            out.append(Violation(PROOF_WITHOUT_THEOREM, uri,
                                 "proof has no theorem among its targets"))
        for ref, hit in resolved:
            if hit != ("statement", "theorem"):
                out.append(Violation(PROOF_WITHOUT_THEOREM, uri,
                                     f"proof target '{ref}' is not a theorem"))
    return out


def _symbol_info(collection, sym):
    theory = collection.theories.get(sym.theory)
    if theory is None:
        return None
    for info in theory.symbols:
        if info.name == sym.name:
            return info
    return None


def _check_formula(collection, subject_uri, obj):
    out = []
    for node in walk(obj):
        if isinstance(node, Sym):
            if _symbol_info(collection, node) is None:
                out.append(Violation(DANGLING_REF, subject_uri,
                                     f"formula references unknown symbol {node.theory}#{node.name}"))
        elif isinstance(node, Apply):
            if not node.args:
                out.append(Violation(ARITY_MISMATCH, subject_uri,
                                     "application with no arguments"))
            if isinstance(node.head, Sym):
                info = _symbol_info(collection, node.head)
                if info is not None:
                    if info.arity is None:
                        if len(node.args) < 1:
                            out.append(Violation(ARITY_MISMATCH, subject_uri,
                                                 f"flexary {node.head.name} applied to no arguments"))
                    elif len(node.args) != info.arity:
                        out.append(Violation(
                            ARITY_MISMATCH, subject_uri,
                            f"{node.head.name} expects {info.arity} arguments, got {len(node.args)}"))
        elif isinstance(node, Bind):
            names = [v.name for v in node.vars]
            if not names:
                out.append(Violation(ARITY_MISMATCH, subject_uri, "binding with no variables"))
            if len(set(names)) != len(names):
                out.append(Violation(DUPLICATE_ID, subject_uri,
                                     "binding with duplicate variable names"))
    return out
