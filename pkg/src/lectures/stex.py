"""Frontend for the semantic-LaTeX subset.

Surface grammar (closed):

    \\begin{module}[id=sets]
      \\importmodule{other}
      \\symdef{union}[prec=500]{#*[\\cup]}
      \\symvariant{binom}{fr}{\\mathcal{C}^{#2}_{#1}}
      \\begin{definition}[id=union-def, for=union]
        prose with inline math $\\union{A,B}$ ...
      \\end{definition}
      \\begin{proof}[id=pf-1, for=thm]
        optional leading prose
        \\step[just=union-def]{first step, may contain $x$}
        \\step{second step}
      \\end{proof}
    \\end{module}

Statement environments: definition, example, theorem, axiom, proof.
Comments run from % to end of line; \\% and \\$ escape literally in prose.
Math sources are macro calls with braced arguments (`\\union{A,B,C}`,
`\\binom{7}{2}`), single-letter variables, and integer literals; the parser
additionally reads back mixfix notations declared by in-scope templates
(`A \\cup B`, `(7 \\atop 2)`), which is what makes linearized output
re-parseable.  Structural tokens `{ } ( ) ,` never act as infix operators.
"""

import re
from collections import defaultdict
from dataclasses import dataclass, field

from .errors import ParseError, ResolveError
from .model import (IDENT_RE, STATEMENT_KINDS, Apply, Formula, Int, ProseRun,
                    Ref, ResolvedProofStep, Statement, Sym, SymbolInfo,
                    Theory, TheoryCollection, Var)
from .notation import DEFAULT_PREC, FlexJoin, Literal, Slot, lex_math, parse_template

# ---------------------------------------------------------------------------
# Surface AST


@dataclass(frozen=True)
class MathRun:
    source: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ProseBlock:
    runs: tuple  # of ProseRun | MathRun


@dataclass(frozen=True)
class SymDecl:
    name: str
    arity: int | None
    precedence: int
    template: tuple


@dataclass(frozen=True)
class NotationVariantDecl:
    symbol: str
    key: str
    template: tuple


@dataclass(frozen=True)
class SurfaceStep:
    content: tuple  # of ProseRun | MathRun
    justification: str | None = None


@dataclass(frozen=True)
class StatementEnv:
    kind: str
    id: str | None
    for_refs: tuple = ()
    content: tuple = ()
    steps: tuple = ()  # of SurfaceStep, proofs only


@dataclass
class SourceModule:
    id: str
    imports: tuple = ()
    body: tuple = ()
    warnings: list = field(default_factory=list, compare=False)


_STRUCTURAL = {"begin", "end", "importmodule", "symdef", "symvariant", "step"}


class _Reader:
    def __init__(self, text):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1

    def eof(self):
        return self.i >= len(self.text)

    def peek(self, k=0):
        j = self.i + k
        return self.text[j] if j < len(self.text) else None

    def loc(self):
        return self.line, self.col

    def error(self, message, loc=None):
        line, col = loc if loc else self.loc()
        raise ParseError(message, line, col)

    def advance(self, n=1):
        for _ in range(n):
            if self.i >= len(self.text):
                return
            if self.text[self.i] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.i += 1

    def at(self, s):
        return self.text.startswith(s, self.i)

    def take(self, s):
        if self.at(s):
            self.advance(len(s))
            return True
        return False

    def skip_space(self):
        while not self.eof():
            ch = self.peek()
            if ch in " \t\n\r":
                self.advance()
            elif ch == "%":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            else:
                return

    def peek_command(self):
        """Name of the control word at the cursor, or None."""
        if self.peek() != "\\":
            return None
        j = self.i + 1
        while j < len(self.text) and self.text[j].isalpha():
            j += 1
        return self.text[self.i + 1 : j] if j > self.i + 1 else None

    def take_command(self, name):
        if self.peek_command() == name:
            self.advance(1 + len(name))
            return True
        return False

    def expect(self, s, what):
        if not self.take(s):
            self.error(f"expected {what}")

    def read_brace_group(self, what="argument"):
        """Balanced {...}; returns (raw text, line, col) of the content."""
        self.skip_space()
        start = self.loc()
        if not self.take("{"):
            self.error(f"expected '{{' before {what}")
        content_loc = self.loc()
        depth = 1
        begin = self.i
        while not self.eof():
            ch = self.peek()
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    raw = self.text[begin : self.i]
                    self.advance()
                    return raw, content_loc[0], content_loc[1]
            self.advance()
        self.error(f"unbalanced braces in {what}", start)

    def read_options(self, allowed, what):
        """Optional [key=value, ...]; bare items extend the previous key's list."""
        self.skip_space()
        if not self.take("["):
            return {}
        start = self.loc()
        begin = self.i
        while not self.eof() and self.peek() != "]":
            self.advance()
        if self.eof():
            self.error(f"unterminated options of {what}", start)
        raw = self.text[begin : self.i]
        self.advance()
        opts = {}
        last = None
        for item in raw.split(","):
            item = item.strip()
            if not item:
                self.error(f"empty option item in {what}", start)
            if "=" in item:
                key, _, value = item.partition("=")
                key, value = key.strip(), value.strip()
                if key not in allowed:
                    self.error(f"unknown option '{key}' of {what}", start)
                if key in opts:
                    self.error(f"duplicate option '{key}' of {what}", start)
                opts[key] = [value]
                last = key
            else:
                if last is None:
                    self.error(f"option value '{item}' without a key in {what}", start)
                opts[last].append(item)
        return opts


def _ident(reader, value, what, loc=None):
    if not IDENT_RE.match(value or ""):
        reader.error(f"malformed {what} '{value}'", loc)
    return value


def _single(reader, opts, key, what):
    values = opts.get(key)
    if values is None:
        return None
    if len(values) != 1:
        reader.error(f"option '{key}' of {what} takes a single value")
    return values[0]


# ---------------------------------------------------------------------------
# Module parsing


def parse_module(text):
    """Parse one .stex module file into a SourceModule.

    Raises ParseError (with line/column) on anything outside the closed
    grammar: unknown environments, malformed options, unbalanced braces,
    duplicate symbol names, misplaced steps.
    """
    r = _Reader(text)
    r.skip_space()
    start = r.loc()
    if not r.take_command("begin"):
        r.error("expected \\begin{module}")
    name, _, _ = r.read_brace_group("environment name")
    if name != "module":
        r.error(f"expected module environment, found '{name}'", start)
    opts = r.read_options({"id"}, "module")
    module_id = _ident(r, _single(r, opts, "id", "module"), "module id", start)

    imports = []
    body = []
    warnings = []
    symbols = {}  # name -> SymDecl
    variants_seen = set()  # (symbol, key)

    while True:
        prose = _collect_runs(r, stop_structural=True)
        if prose:
            body.append(ProseBlock(tuple(prose)))
        if r.eof():
            r.error("unexpected end of file inside module")
        cmd = r.peek_command()
        cmd_loc = r.loc()
        if cmd == "end":
            r.take_command("end")
            env, _, _ = r.read_brace_group("environment name")
            if env != "module":
                r.error(f"unexpected \\end{{{env}}} (module is open)", cmd_loc)
            break
        if cmd == "importmodule":
            r.take_command("importmodule")
            target, ln, col = r.read_brace_group("import target")
            imports.append(_ident(r, target.strip(), "import target", (ln, col)))
        elif cmd == "symdef":
            r.take_command("symdef")
            name_raw, ln, col = r.read_brace_group("symbol name")
            sym_name = _ident(r, name_raw.strip(), "symbol name", (ln, col))
            sopts = r.read_options({"prec"}, "symdef")
            prec = DEFAULT_PREC
            if "prec" in sopts:
                value = _single(r, sopts, "prec", "symdef")
                try:
                    prec = int(value)
                except ValueError:
                    r.error(f"malformed precedence '{value}'", cmd_loc)
            tmpl_raw, ln, col = r.read_brace_group("notation template")
            tokens, arity = parse_template(tmpl_raw, ln, col)
            if sym_name in symbols:
                r.error(f"duplicate symbol name '{sym_name}'", cmd_loc)
            decl = SymDecl(sym_name, arity, prec, tokens)
            symbols[sym_name] = decl
            body.append(decl)
        elif cmd == "symvariant":
            r.take_command("symvariant")
            name_raw, ln, col = r.read_brace_group("symbol name")
            sym_name = _ident(r, name_raw.strip(), "symbol name", (ln, col))
            key_raw, ln, col = r.read_brace_group("variant key")
            key = _ident(r, key_raw.strip(), "variant key", (ln, col))
            tmpl_raw, ln, col = r.read_brace_group("notation template")
            tokens, arity = parse_template(tmpl_raw, ln, col)
            decl = symbols.get(sym_name)
            if decl is None:
                r.error(f"variant for undeclared symbol '{sym_name}'", cmd_loc)
            if arity != decl.arity:
                r.error(f"variant '{key}' of '{sym_name}' changes the arity", cmd_loc)
            if (sym_name, key) in variants_seen:
                warnings.append(
                    f"notation variant {sym_name}/{key} redefined; last declaration wins")
            variants_seen.add((sym_name, key))
            body.append(NotationVariantDecl(sym_name, key, tokens))
        elif cmd == "begin":
            r.take_command("begin")
            env, ln, col = r.read_brace_group("environment name")
            if env not in STATEMENT_KINDS:
                r.error(f"unknown environment '{env}'", cmd_loc)
            body.append(_parse_statement(r, env, cmd_loc))
        elif cmd == "step":
            r.error("\\step outside a proof environment", cmd_loc)
        else:
            r.error(f"unknown command '\\{cmd}' at module level", cmd_loc)

    r.skip_space()
    if not r.eof():
        r.error("content after \\end{module} (one module per file)")
    return SourceModule(module_id, tuple(imports), tuple(body), warnings)


def _parse_statement(r, kind, start_loc):
    opts = r.read_options({"id", "for"}, kind)
    sid = _single(r, opts, "id", kind)
    if sid is not None:
        _ident(r, sid, "statement id", start_loc)
    for_refs = tuple(_ident(r, v, "for-reference", start_loc) for v in opts.get("for", []))

    content = []
    steps = []
    while True:
        runs = _collect_runs(r, stop_structural=True)
        if runs:
            if steps:
                r.error(f"prose after \\step items in '{kind}'")
            content.extend(runs)
        if r.eof():
            r.error(f"unexpected end of file inside '{kind}'")
        cmd = r.peek_command()
        cmd_loc = r.loc()
        if cmd == "end":
            r.take_command("end")
            env, _, _ = r.read_brace_group("environment name")
            if env != kind:
                r.error(f"unexpected \\end{{{env}}} ('{kind}' is open)", cmd_loc)
            break
        if cmd == "step":
            if kind != "proof":
                r.error(f"\\step not allowed in '{kind}'", cmd_loc)
            r.take_command("step")
            sopts = r.read_options({"just"}, "step")
            just = _single(r, sopts, "just", "step")
            if just is not None:
                _ident(r, just, "justification reference", cmd_loc)
            raw, ln, col = r.read_brace_group("step content")
            steps.append(SurfaceStep(_parse_inline(raw, ln, col), just))
        elif cmd == "begin":
            r.error(f"environments cannot nest inside '{kind}'", cmd_loc)
        else:
            r.error(f"unknown command '\\{cmd}' inside '{kind}'", cmd_loc)
    return StatementEnv(kind, sid, for_refs, tuple(content), tuple(steps))


def _collect_runs(r, stop_structural):
    """Prose and $math$ runs until a structural command (or EOF).

    Whitespace inside prose collapses to single spaces; runs that collapse to
    nothing are dropped, and edge whitespace is trimmed per block.
    """
    runs = []
    buf = []

    def flush():
        if buf:
            text = re.sub(r"\s+", " ", "".join(buf))
            if text.strip():
                runs.append(ProseRun(text))
            buf.clear()

    while not r.eof():
        ch = r.peek()
        if ch == "%":
            while not r.eof() and r.peek() != "\n":
                r.advance()
            buf.append(" ")
        elif ch == "$":
            loc = r.loc()
            r.advance()
            begin = r.i
            while not r.eof() and r.peek() != "$":
                r.advance()
            if r.eof():
                r.error("unterminated math run", loc)
            source = r.text[begin : r.i]
            r.advance()
            flush()
            runs.append(MathRun(source, loc[0], loc[1]))
        elif ch == "\\":
            if r.at("\\$") or r.at("\\%"):
                buf.append(r.peek(1))
                r.advance(2)
                continue
            cmd = r.peek_command()
            if cmd is None:
                r.error("lone backslash in prose")
            if stop_structural and cmd in _STRUCTURAL:
                break
            r.error(f"command '\\{cmd}' not allowed in prose")
        else:
            buf.append(ch)
            r.advance()
    flush()
    # trim edge whitespace of the block
    if runs and isinstance(runs[0], ProseRun):
        runs[0] = ProseRun(runs[0].text.lstrip())
    if runs and isinstance(runs[-1], ProseRun):
        runs[-1] = ProseRun(runs[-1].text.rstrip())
    return [x for x in runs if not (isinstance(x, ProseRun) and not x.text)]


def _parse_inline(raw, line, col):
    sub = _Reader(raw)
    sub.line, sub.col = line, col
    runs = _collect_runs(sub, stop_structural=False)
    return tuple(runs)


# ---------------------------------------------------------------------------
# Scope and the math parser


@dataclass(frozen=True)
class ScopeSymbol:
    theory: str
    name: str
    arity: int | None
    precedence: int
    template: tuple
    variants: tuple = ()  # of (key, tokens)


# tokens that structure the grammar itself and never key a notation
_RESERVED = {"{", "}", ",", ")"}


class Scope:
    """Symbols visible at a point of use, with notation lookup tables."""

    def __init__(self, symbols):
        self.symbols = tuple(symbols)
        self.by_name = defaultdict(list)
        self.closed = defaultdict(list)  # first literal -> [(sym, tokens)]
        self.infix = defaultdict(list)  # literal after slot 1 -> [(sym, tokens)]
        self.flex = defaultdict(list)  # first separator token -> [(sym, sep)]
        for sym in self.symbols:
            self.by_name[sym.name].append(sym)
            for tokens in self._templates(sym):
                self._register(sym, tokens)

    @staticmethod
    def _templates(sym):
        yield sym.template
        for _, tokens in sym.variants:
            yield tokens

    def _register(self, sym, tokens):
        if not tokens:
            return
        first = tokens[0]
        if isinstance(first, FlexJoin):
            key = first.separator[0]
            if key not in _RESERVED:
                self.flex[key].append((sym, first.separator))
        elif isinstance(first, Slot):
            rest = tokens[1:]
            if rest and isinstance(rest[0], Literal) and rest[0].text not in _RESERVED:
                self.infix[rest[0].text].append((sym, tokens))
        elif isinstance(first, Literal):
            # letters and digits would shadow variables/numbers
            if first.text[0] == "\\" or first.text == "(":
                self.closed[first.text].append((sym, tokens))

    def lookup(self, name, loc):
        entries = self.by_name.get(name)
        if not entries:
            return None
        if len(entries) > 1:
            names = ", ".join(f"{e.theory}#{e.name}" for e in entries)
            raise ParseError(f"ambiguous symbol reference \\{name} ({names})", *loc)
        return entries[0]


def scope_for(collection, theory_id):
    """Scope of a theory inside a resolved collection: own + transitive imports."""
    seen = []
    stack = [theory_id]
    visited = set()
    while stack:
        tid = stack.pop(0)
        if tid in visited or tid not in collection.theories:
            continue
        visited.add(tid)
        seen.append(tid)
        stack.extend(collection.theories[tid].imports)
    symbols = []
    for tid in seen:
        for info in collection.theories[tid].symbols:
            symbols.append(ScopeSymbol(tid, info.name, info.arity, info.precedence,
                                       info.template, info.variants))
    return Scope(symbols)


class _Fail(Exception):
    """Internal backtracking signal of the notation matcher."""


class _MathParser:
    def __init__(self, tokens, scope):
        self.toks = tokens
        self.scope = scope
        self.i = 0
        self.depth = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self, what="token"):
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else None
            raise ParseError(f"unexpected end of math (wanted {what})",
                             last.line if last else 1, last.column if last else 1)
        self.i += 1
        return t

    def parse(self):
        obj = self.expr(0)
        t = self.peek()
        if t is not None:
            raise ParseError(f"unexpected '{t.text}'", t.line, t.column)
        return obj

    # --- Pratt machinery ---

    def expr(self, min_bp):
        self.depth += 1
        if self.depth > 200:
            raise ParseError("math expression nests too deeply", 1, 1)
        try:
            left = self.nud()
            while True:
                t = self.peek()
                if t is None:
                    break
                extended = self._led(left, t, min_bp)
                if extended is None:
                    break
                left = extended
            return left
        finally:
            self.depth -= 1

    def _led(self, left, t, min_bp):
        for sym, sep in self.scope.flex.get(t.text, []):
            if sym.precedence < min_bp:
                continue
            mark = self.i
            try:
                # operands bind one level tighter so the chain collects flat
                args = [left]
                while self._try_separator(sep):
                    args.append(self.expr(sym.precedence + 1))
                if len(args) >= 2:
                    return Apply(Sym(sym.theory, sym.name), tuple(args))
            except (ParseError, _Fail):
                pass
            self.i = mark
        for sym, tokens in self.scope.infix.get(t.text, []):
            if sym.precedence < min_bp:
                continue
            mark = self.i
            try:
                slots = {tokens[0].index: left}
                self._match_tokens(sym, tokens[1:], slots)
                return self._assemble(sym, slots)
            except (ParseError, _Fail):
                self.i = mark
        return None

    def _try_separator(self, sep):
        mark = self.i
        for text in sep:
            t = self.peek()
            if t is None or t.text != text:
                self.i = mark
                return False
            self.i += 1
        return True

    def _match_tokens(self, sym, tokens, slots):
        for tok in tokens:
            if isinstance(tok, Literal):
                t = self.peek()
                if t is None or t.text != tok.text:
                    raise _Fail()
                self.i += 1
            elif isinstance(tok, Slot):
                obj = self.expr(tok.min_prec)
                if tok.index in slots and slots[tok.index] != obj:
                    raise _Fail()
                slots[tok.index] = obj
            else:  # closed flexary
                ops = slots.setdefault("flex", [])
                ops.append(self.expr(sym.precedence + 1))
                while self._try_separator(tok.separator):
                    ops.append(self.expr(sym.precedence + 1))

    def _assemble(self, sym, slots):
        head = Sym(sym.theory, sym.name)
        if sym.arity is None:
            args = tuple(slots.get("flex", []))
            if not args:
                raise _Fail()
            return Apply(head, args)
        if sym.arity == 0:
            return head
        try:
            args = tuple(slots[i] for i in range(1, sym.arity + 1))
        except KeyError:
            raise _Fail() from None
        return Apply(head, args)

    # --- atoms ---

    def nud(self):
        t = self.next("expression")
        if t.kind == "digits":
            return Int(int(t.text))
        if t.kind == "letter":
            return Var(t.text)
        if t.text == "(":
            matched = self._closed_candidates(t)
            if matched is not None:
                return matched
            obj = self.expr(0)
            self._expect_sym(")")
            return obj
        if t.text == "{":
            obj = self.expr(0)
            self._expect_sym("}")
            return obj
        if t.kind == "cmd":
            name = t.text[1:]
            nxt = self.peek()
            if nxt is not None and nxt.text == "{" and self.scope.by_name.get(name):
                return self._macro_call(t, name)
            matched = self._closed_candidates(t)
            if matched is not None:
                return matched
            entry = self.scope.lookup(name, (t.line, t.column))
            if entry is not None:
                return Sym(entry.theory, entry.name)
            raise ParseError(f"unknown macro \\{name}", t.line, t.column)
        raise ParseError(f"unexpected '{t.text}'", t.line, t.column)

    def _closed_candidates(self, t):
        for sym, tokens in self.scope.closed.get(t.text, []):
            mark = self.i
            try:
                slots = {}
                self._match_tokens(sym, tokens[1:], slots)
                return self._assemble(sym, slots)
            except (ParseError, _Fail):
                self.i = mark
        return None

    def _macro_call(self, t, name):
        entry = self.scope.lookup(name, (t.line, t.column))
        args = []
        while (nxt := self.peek()) is not None and nxt.text == "{":
            self.i += 1
            closer = self.peek()
            if closer is not None and closer.text == "}":
                raise ParseError(f"empty argument list for \\{name}", t.line, t.column)
            args.append(self.expr(0))
            while (sep := self.peek()) is not None and sep.text == ",":
                self.i += 1
                args.append(self.expr(0))
            self._expect_sym("}")
        if entry.arity is None:
            if not args:
                raise ParseError(f"\\{name} needs at least one argument", t.line, t.column)
        elif len(args) != entry.arity:
            raise ParseError(
                f"\\{name} expects {entry.arity} argument(s), got {len(args)}",
                t.line, t.column)
        head = Sym(entry.theory, entry.name)
        return Apply(head, tuple(args)) if args else head

    def _expect_sym(self, text):
        t = self.peek()
        if t is None or t.text != text:
            if t is None:
                last = self.toks[-1]
                raise ParseError(f"expected '{text}'", last.line, last.column)
            raise ParseError(f"expected '{text}', found '{t.text}'", t.line, t.column)
        self.i += 1


def parse_math(source, scope, line=1, column=1):
    """Parse math source under a Scope into a MathObject.

    Raises ParseError on unknown macros, arity mismatches, empty argument
    lists, and anything outside the grammar.
    """
    tokens = lex_math(source, line, column)
    if not tokens:
        raise ParseError("empty math run", line, column)
    return _MathParser(tokens, scope).parse()


# ---------------------------------------------------------------------------
# Resolution


def resolve(modules, base_uri):
    """Link a set of parsed modules into a TheoryCollection.

    Parses every math run against the visible scope (own symbols plus
    transitively imported ones), binds for/just references, and assigns
    generated statement ids `{kind}-{ordinal}`.  Raises ResolveError on
    duplicate module ids, missing imports, import cycles, ambiguous or
    unresolvable references, and math errors.
    """
    mods = list(modules)
    by_id = {}
    for m in mods:
        if m.id in by_id:
            raise ResolveError(f"duplicate module id '{m.id}'")
        by_id[m.id] = m

    closures = {m.id: _closure(m.id, by_id) for m in mods}

    # Per-module symbol tables (variants merged, declaration order kept).
    infos = {}
    for m in mods:
        table = {}
        for item in m.body:
            if isinstance(item, SymDecl):
                table[item.name] = (item, {})
            elif isinstance(item, NotationVariantDecl):
                table[item.symbol][1][item.key] = item.template
        infos[m.id] = {
            name: SymbolInfo(name, decl.arity, decl.precedence, decl.template,
                             tuple(sorted(variants.items())))
            for name, (decl, variants) in table.items()
        }

    # Statement ids (generated ones count position among same-kind statements).
    stmt_ids = {}
    for m in mods:
        ids = []
        ordinals = defaultdict(int)
        for item in m.body:
            if not isinstance(item, StatementEnv):
                continue
            ordinals[item.kind] += 1
            ids.append(item.id or f"{item.kind}-{ordinals[item.kind]}")
        stmt_ids[m.id] = ids

    warnings = []
    theories = {}
    for m in mods:
        for w in m.warnings:
            warnings.append(f"{m.id}: {w}")
        visible = [m.id] + sorted(closures[m.id] - {m.id})
        scope = Scope([
            ScopeSymbol(tid, info.name, info.arity, info.precedence,
                        info.template, info.variants)
            for tid in visible for info in infos[tid].values()
        ])
        resolver = _RefResolver(m.id, visible, infos, by_id, stmt_ids)
        statements = []
        stmt_iter = iter(stmt_ids[m.id])
        for item in m.body:
            if not isinstance(item, StatementEnv):
                continue
            sid = next(stmt_iter)
            for_targets = tuple(resolver.bind(ref, f"{m.id}#{sid}") for ref in item.for_refs)
            content = _resolve_runs(item.content, scope, m.id, sid)
            steps = []
            for idx, step in enumerate(item.steps, start=1):
                just = None
                if step.justification is not None:
                    just = resolver.bind(step.justification, f"{m.id}#{sid}.{idx}")
                steps.append(ResolvedProofStep(
                    idx, _resolve_runs(step.content, scope, m.id, f"{sid}.{idx}"), just))
            statements.append(Statement(sid, item.kind, for_targets, content, tuple(steps)))
        theories[m.id] = Theory(m.id, tuple(m.imports),
                                tuple(infos[m.id].values()), tuple(statements))
    return TheoryCollection(base_uri, theories, warnings)


def _closure(tid, by_id, _trail=None):
    """Transitive imports of a module; raises on cycles and missing targets."""
    trail = _trail or []
    if tid in trail:
        cycle = trail[trail.index(tid):] + [tid]
        raise ResolveError("import cycle: " + " -> ".join(cycle))
    if tid not in by_id:
        raise ResolveError(f"missing import target '{tid}'", module=trail[-1] if trail else None)
    out = {tid}
    for imp in by_id[tid].imports:
        out |= _closure(imp, by_id, trail + [tid])
    return out


class _RefResolver:
    def __init__(self, module_id, visible, infos, by_id, stmt_ids):
        self.module_id = module_id
        self.candidates = defaultdict(set)
        for tid in visible:
            for name in infos[tid]:
                self.candidates[name].add(Ref(tid, name))
            for sid in stmt_ids[tid]:
                self.candidates[sid].add(Ref(tid, sid))

    def bind(self, name, context):
        hits = sorted(self.candidates.get(name, ()), key=str)
        if not hits:
            raise ResolveError(f"unresolved reference '{name}' at {context}",
                               module=self.module_id)
        if len(hits) > 1:
            options = ", ".join(str(h) for h in hits)
            raise ResolveError(f"ambiguous reference '{name}' at {context} ({options})",
                               module=self.module_id)
        return hits[0]


def _resolve_runs(runs, scope, module_id, where):
    out = []
    for run in runs:
        if isinstance(run, ProseRun):
            out.append(run)
        else:
            try:
                obj = parse_math(run.source, scope, run.line or 1, run.column or 1)
            except ParseError as e:
                raise ResolveError(f"in math at {module_id}#{where}: {e}",
                                   module=module_id) from e
            out.append(Formula(obj))
    return tuple(out)
