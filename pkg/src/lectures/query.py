"""In-memory triple store: basic graph patterns, property paths, canned queries.

Patterns are conjunctive; terms are bound URIs, literals, or `?var`
variables.  A predicate may carry a path modifier: `+` (one or more edges)
or `*` (zero or more; identity pairs range over every term occurring in the
store as subject or object).  Join strategy is left-to-right nested index
lookups — desk-scale corpora, no optimizer.

The store allows many concurrent readers; loading is a single-writer
operation (the server serializes loads behind commits).
"""

from dataclasses import dataclass

from .errors import PatternError
from .rdf import DEFAULT_VOCAB, RDF_NS, RDF_TYPE


@dataclass(frozen=True, order=True)
class Lit:
    value: str


def _term(triple):
    return Lit(triple.o) if triple.literal else triple.o


class Store:
    def __init__(self, namespaces=None):
        self.namespaces = dict(namespaces or {"o": DEFAULT_VOCAB.namespace, "rdf": RDF_NS})
        self._spo = {}
        self._pos = {}
        self._osp = {}
        self._size = 0

    def __len__(self):
        return self._size

    def load(self, triples):
        """Insert triples (idempotent); returns the store."""
        for t in triples:
            s, p, o = t.s, t.p, _term(t)
            level = self._spo.setdefault(s, {}).setdefault(p, set())
            if o in level:
                continue
            level.add(o)
            self._pos.setdefault(p, {}).setdefault(o, set()).add(s)
            self._osp.setdefault(o, {}).setdefault(s, set()).add(p)
            self._size += 1
        return self

    def triples(self):
        for s, po in self._spo.items():
            for p, objs in po.items():
                for o in objs:
                    yield (s, p, o)

    def terms(self):
        """Every subject or object in the store."""
        out = set(self._spo)
        out.update(self._osp)
        return out

    def predicates(self):
        return set(self._pos)

    def match(self, s=None, p=None, o=None):
        """Triples matching a (s, p, o) mask; None is a wildcard."""
        if s is not None and p is not None:
            objs = self._spo.get(s, {}).get(p, set())
            return [(s, p, x) for x in objs if o is None or x == o]
        if s is not None:
            return [(s, p2, x) for p2, objs in self._spo.get(s, {}).items()
                    for x in objs if o is None or x == o]
        if p is not None and o is not None:
            return [(x, p, o) for x in self._pos.get(p, {}).get(o, set())]
        if p is not None:
            return [(x, p, obj) for obj, subs in self._pos.get(p, {}).items()
                    for x in subs]
        if o is not None:
            return [(x, p2, o) for x, preds in self._osp.get(o, {}).items()
                    for p2 in preds]
        return list(self.triples())

    def edges(self, p):
        """Adjacency map of one predicate."""
        out = {}
        for o, subs in self._pos.get(p, {}).items():
            for s in subs:
                out.setdefault(s, set()).add(o)
        return out


@dataclass(frozen=True)
class TriplePattern:
    s: object  # URI str | Lit | "?var"
    p: object
    o: object
    path: str | None = None  # None | "+" | "*"


def is_var(term):
    return isinstance(term, str) and term.startswith("?")


def expand_term(text, namespaces):
    """Resolve a prefixed name against the store's prefix map."""
    if is_var(text) or text.startswith("http://") or text.startswith("https://"):
        return text
    prefix, sep, local = text.partition(":")
    if sep:
        if prefix not in namespaces:
            raise PatternError(f"unknown prefix '{prefix}:'")
        return namespaces[prefix] + local
    return text


def parse_patterns(payload, namespaces):
    """Build TriplePatterns from the frozen JSON shape.

    Each pattern object: {"s": term, "p": term, "o": term, "path": "+"|"*"?}
    where a term is "?var", a prefixed name, a full URI, or
    {"literal": "..."}.
    """
    if not isinstance(payload, list) or not payload:
        raise PatternError("patterns must be a non-empty list")
    out = []
    for item in payload:
        if not isinstance(item, dict):
            raise PatternError("each pattern must be an object")
        terms = {}
        for key in ("s", "p", "o"):
            if key not in item:
                raise PatternError(f"pattern missing '{key}'")
            value = item[key]
            if isinstance(value, dict):
                if "literal" not in value:
                    raise PatternError(f"bad term object for '{key}'")
                terms[key] = Lit(str(value["literal"]))
            elif isinstance(value, str):
                terms[key] = expand_term(value, namespaces)
            else:
                raise PatternError(f"bad term for '{key}'")
        path = item.get("path")
        if path not in (None, "+", "*"):
            raise PatternError(f"bad path modifier {path!r}")
        if path and (is_var(terms["p"]) or isinstance(terms["p"], Lit)):
            raise PatternError("path predicate must be a bound URI")
        if isinstance(terms["p"], Lit):
            raise PatternError("predicate cannot be a literal")
        out.append(TriplePattern(terms["s"], terms["p"], terms["o"], path))
    return out


def _closure_pairs(store, p, reflexive):
    """(x, y) pairs connected by >=1 p-edges; plus identity pairs if reflexive."""
    edges = store.edges(p)
    pairs = set()
    for src in edges:
        seen = set()
        frontier = list(edges.get(src, ()))
        while frontier:
            node = frontier.pop()
            if node in seen:
                continue
            seen.add(node)
            frontier.extend(edges.get(node, ()))
        pairs.update((src, t) for t in seen)
    if reflexive:
        pairs.update((t, t) for t in store.terms())
    return pairs


def _sort_key(term):
    return ("lit", term.value) if isinstance(term, Lit) else ("uri", term)


def select(store, patterns):
    """All variable bindings satisfying every pattern, deterministically sorted."""
    bindings = [{}]
    for pat in patterns:
        new = []
        for binding in bindings:
            s = binding.get(pat.s, pat.s) if is_var(pat.s) else pat.s
            p = binding.get(pat.p, pat.p) if is_var(pat.p) else pat.p
            o = binding.get(pat.o, pat.o) if is_var(pat.o) else pat.o
            if pat.path:
                pairs = _closure_pairs(store, p, reflexive=pat.path == "*")
                rows = [(cs, p, co) for cs, co in pairs
                        if (is_var(s) or cs == s) and (is_var(o) or co == o)]
            else:
                rows = store.match(None if is_var(s) else s,
                                   None if is_var(p) else p,
                                   None if is_var(o) else o)
            for cs, cp, co in rows:
                nb = dict(binding)
                ok = True
                for var, val in ((s, cs), (p, cp), (o, co)):
                    if is_var(var):
                        if var in nb and nb[var] != val:
                            ok = False
                            break
                        nb[var] = val
                if ok:
                    new.append(nb)
        bindings = new
    unique = {tuple(sorted((k, _sort_key(v)) for k, v in b.items())): b
              for b in bindings}
    return [unique[k] for k in sorted(unique)]


# ---------------------------------------------------------------------------
# Canned queries


@dataclass(frozen=True)
class GapReport:
    concepts_without_examples: tuple
    unjustified_steps: tuple


def _home_theory(uri):
    return uri.partition("#")[0]


def examples_for(store, topic_uri, prerequisite_uris, vocab=DEFAULT_VOCAB):
    """(concept, example) pairs for a topic theory under given prerequisites.

    Concepts are the symbols the topic theory declares; examples count when
    their home theory is the topic, a prerequisite, or anything a
    prerequisite transitively imports.
    """
    o = vocab.term
    concepts = {t[2] for t in store.match(topic_uri, o("declares"), None)}
    allowed = {topic_uri} | set(prerequisite_uris)
    closure = _closure_pairs(store, o("imports"), reflexive=False)
    for prereq in prerequisite_uris:
        allowed.update(t for s, t in closure if s == prereq)
    pairs = set()
    for example, _, _ in store.match(None, RDF_TYPE, o("Example")):
        if _home_theory(example) not in allowed:
            continue
        for _, _, concept in store.match(example, o("exemplifies"), None):
            if concept in concepts:
                pairs.add((concept, example))
    return sorted(pairs)


def find_gaps(store, vocab=DEFAULT_VOCAB):
    """Symbols with no incoming o:exemplifies; steps with no o:justifiedBy."""
    o = vocab.term
    silent = []
    for sym, _, _ in store.match(None, RDF_TYPE, o("Symbol")):
        if not store.match(None, o("exemplifies"), sym):
            silent.append(sym)
    unjustified = []
    for step, _, _ in store.match(None, RDF_TYPE, o("ProofStep")):
        if not store.match(step, o("justifiedBy"), None):
            unjustified.append(step)
    return GapReport(tuple(sorted(set(silent))), tuple(sorted(set(unjustified))))
