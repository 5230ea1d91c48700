"""Seeded random generators for the round-trip suites."""

import string

from lectures.model import (Apply, Bind, Formula, Int, ProseRun, Ref,
                            ResolvedProofStep, Statement, Sym, SymbolInfo,
                            Theory, TheoryCollection, Var, validate)
from lectures.notation import parse_template
from lectures.render import NotationEntry, RenderContext
from lectures.stex import Scope, ScopeSymbol


def _tmpl(source):
    return parse_template(source)[0]


# ---------------------------------------------------------------------------
# Surface-expressible objects (for parse_math . linearize identity)
#
# All precedences are distinct and infix templates carry explicit slot
# requirements, so linearization is unambiguous; the generator additionally
# never nests a flexary application directly inside itself (the flat join
# could not tell the two trees apart).

FUZZ_SYMBOLS = (
    ScopeSymbol("sets", "union", None, 500, _tmpl(r"#*[\cup]")),
    ScopeSymbol("sets", "inter", None, 520, _tmpl(r"#*[\cap]")),
    ScopeSymbol("sets", "emptyset", 0, 1000, _tmpl(r"\emptyset")),
    ScopeSymbol("combinat", "binom", 2, 900, _tmpl(r"(#1 \atop #2)"),
                (("fr", _tmpl(r"\mathcal{C}^{#2}_{#1}")),)),
    ScopeSymbol("arith", "plus", 2, 300, _tmpl(r"#1!300 + #2!301")),
    ScopeSymbol("arith", "times", 2, 400, _tmpl(r"#1!400 * #2!401")),
    ScopeSymbol("arith", "power", 2, 700, _tmpl(r"#1!701 ^ {#2}")),
    ScopeSymbol("sets", "subseteq", 2, 200, _tmpl(r"#1!201 \subseteq #2!201")),
)

FUZZ_SCOPE = Scope(FUZZ_SYMBOLS)

FUZZ_CONTEXT = RenderContext("http://ex.org", {
    (s.theory, s.name): NotationEntry(s.arity, s.precedence, s.template, s.variants)
    for s in FUZZ_SYMBOLS
})

_APPLICABLE = [s for s in FUZZ_SYMBOLS if s.arity != 0]


def random_surface_object(rng, depth=0, forbid=None):
    leaf_bias = 0.35 + 0.2 * depth
    if depth >= 4 or rng.random() < leaf_bias:
        kind = rng.choice(("var", "var", "int", "const"))
        if kind == "var":
            return Var(rng.choice(string.ascii_letters))
        if kind == "int":
            return Int(rng.randrange(0, 1000))
        return Sym("sets", "emptyset")
    sym = rng.choice([s for s in _APPLICABLE if s.name != forbid])
    if sym.arity is None:
        nargs = rng.choice((1, 2, 2, 3, 4))
        args = tuple(random_surface_object(rng, depth + 1, forbid=sym.name)
                     for _ in range(nargs))
    else:
        args = tuple(random_surface_object(rng, depth + 1)
                     for _ in range(sym.arity))
    return Apply(Sym(sym.theory, sym.name), args)


# ---------------------------------------------------------------------------
# Valid collections (for from_xml . to_xml identity)

_FLEX_SEPS = (r"\cup", r"\cap", r"\wedge", r"\vee", r"\circ")
_CONST_LITS = (r"\emptyset", r"\infty", r"\vDash", r"\forall")
_PROSE_WORDS = ("sets", "join", "every", "member", "tree <&> edge", "step",
                'quote"inside', "unit")


def _random_template(rng, k):
    arity = rng.choice((None, 0, 1, 2, 3))
    if arity is None:
        return None, _tmpl(f"#*[{rng.choice(_FLEX_SEPS)}]")
    if arity == 0:
        return 0, _tmpl(rng.choice(_CONST_LITS))
    slots = "".join("{#%d}" % (i + 1) for i in range(arity))
    return arity, _tmpl(f"\\op{k}" + slots)


def _random_formula(rng, symbols, depth=0):
    if depth >= 3 or rng.random() < 0.4 or not symbols:
        pick = rng.random()
        if pick < 0.4:
            return Var(rng.choice(string.ascii_lowercase))
        if pick < 0.7:
            return Int(rng.randrange(-50, 1000))
        if symbols:
            tid, info = rng.choice(symbols)
            return Sym(tid, info.name)
        return Var("x")
    roll = rng.random()
    if roll < 0.15:
        names = rng.sample(string.ascii_lowercase, rng.choice((1, 2)))
        return Bind(_random_formula(rng, symbols, depth + 1),
                    tuple(Var(n) for n in names),
                    _random_formula(rng, symbols, depth + 1))
    if roll < 0.25:  # application with a non-symbol head
        return Apply(Var(rng.choice(string.ascii_lowercase)),
                     tuple(_random_formula(rng, symbols, depth + 1)
                           for _ in range(rng.choice((1, 2)))))
    tid, info = rng.choice(symbols)
    nargs = info.arity if info.arity else rng.choice((1, 2, 3))
    if info.arity == 0:
        return Sym(tid, info.name)
    return Apply(Sym(tid, info.name),
                 tuple(_random_formula(rng, symbols, depth + 1)
                       for _ in range(nargs)))


def _random_content(rng, symbols):
    items = []
    for _ in range(rng.randrange(0, 3)):
        if rng.random() < 0.5:
            items.append(ProseRun(" ".join(
                rng.choice(_PROSE_WORDS) for _ in range(rng.randrange(1, 5)))))
        else:
            items.append(Formula(_random_formula(rng, symbols)))
    return tuple(items)


def random_collection(rng):
    """A random valid TheoryCollection (asserts its own validity)."""
    n = rng.randrange(1, 5)
    tids = [f"t{i}" for i in range(n)]
    theories = {}
    all_symbols = []  # (tid, SymbolInfo) in creation order
    statement_refs = []  # (tid, sid) of any statement
    theorem_refs = []  # (tid, sid) of theorems only
    for i, tid in enumerate(tids):
        imports = tuple(t for t in tids[:i] if rng.random() < 0.4)
        symbols = []
        for k in range(rng.randrange(0, 4)):
            arity, tokens = _random_template(rng, k)
            variants = ()
            if arity == 2 and rng.random() < 0.5:
                variants = (("alt", _tmpl(r"\mathcal{C}^{#2}_{#1}")),)
            info = SymbolInfo(f"s{k}", arity, rng.choice((0, 200, 500, 1000)),
                              tokens, variants)
            symbols.append(info)
            all_symbols.append((tid, info))
        visible = [(t, s) for t, s in all_symbols if t == tid or t in imports]
        statements = []
        counters = {}
        for j in range(rng.randrange(0, 5)):
            kind = rng.choice(("definition", "example", "theorem", "axiom", "proof"))
            if kind == "definition" and not visible:
                kind = "axiom"
            if kind == "proof" and not any(t == tid or t in imports
                                           for t, _ in theorem_refs):
                kind = "theorem"
            counters[kind] = counters.get(kind, 0) + 1
            sid = (f"{kind}-{counters[kind]}" if rng.random() < 0.5
                   else f"st{i}x{j}")
            for_targets = ()
            steps = ()
            if kind == "definition":
                t, s = rng.choice(visible)
                for_targets = (Ref(t, s.name),)
            elif kind == "example" and visible and rng.random() < 0.8:
                t, s = rng.choice(visible)
                for_targets = (Ref(t, s.name),)
            elif kind == "proof":
                choices = [(t, s) for t, s in theorem_refs
                           if t == tid or t in imports]
                t, s = rng.choice(choices)
                for_targets = (Ref(t, s),)
                steps = tuple(
                    ResolvedProofStep(ix + 1, _random_content(rng, visible),
                                      rng.choice((None,) * 2 + (Ref(t, s),)))
                    for ix in range(rng.randrange(1, 4)))
            statements.append(Statement(sid, kind, for_targets,
                                        _random_content(rng, visible), steps))
            statement_refs.append((tid, sid))
            if kind == "theorem":
                theorem_refs.append((tid, sid))
        theories[tid] = Theory(tid, imports, tuple(symbols), tuple(statements))
    collection = TheoryCollection("http://ex.org", theories)
    problems = validate(collection)
    assert problems == [], f"generator produced invalid collection: {problems[:3]}"
    return collection
