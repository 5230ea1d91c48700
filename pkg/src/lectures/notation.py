"""Notation templates and the shared math token lexer.

A notation template is a flat token sequence driving three backends: the
MathML renderer, the ASCII linearizer, and the notation-aware math parser.
Template source syntax:

    literals        any math tokens: \cup  (  )  ^  _  {  }  letters, digits
    #N              argument slot N (1-based)
    #N!P            slot N, children bracketed unless their precedence >= P
    #*[sep]         flexary join: operands joined by the separator tokens

A template containing a flexary join declares a flexary symbol (any number
of arguments, at least one); otherwise the arity is the highest slot index,
and every index 1..n must occur.  Arity is represented as `int | None`,
`None` meaning flexary.
"""

from dataclasses import dataclass

from .errors import ParseError

# Effective precedence of self-delimiting leaves (variables, integers,
# function-style applications).  Plain symbol precedences are ~0..1000.
ATOM_PREC = 1_000_000

# Default symbol precedence when `prec` is omitted: atom-like, never bracketed.
DEFAULT_PREC = 1000


@dataclass(frozen=True)
class Token:
    kind: str  # "cmd" | "letter" | "digits" | "sym"
    text: str
    line: int = 1
    column: int = 1

    def __repr__(self):
        return f"Token({self.text!r})"


# Single characters the math lexer accepts verbatim.
_SYM_CHARS = set("{}(),^_.+-*/<>=|!;:")


def lex_math(source, line=1, column=1):
    """Tokenize math source (also used for template literal text).

    Returns a list of Tokens; raises ParseError on characters outside the
    closed grammar.  `line`/`column` seed the location counters so errors in
    embedded math runs point into the enclosing file.
    """
    tokens = []
    i, ln, col = 0, line, column
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i, ln, col = i + 1, ln + 1, 1
            continue
        if ch in " \t":
            i, col = i + 1, col + 1
            continue
        start_ln, start_col = ln, col
        if ch == "\\":
            j = i + 1
            while j < n and source[j].isalpha():
                j += 1
            if j == i + 1:
                raise ParseError("lone backslash in math", start_ln, start_col)
            tokens.append(Token("cmd", source[i:j], start_ln, start_col))
            col += j - i
            i = j
        elif ch.isdigit():
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("digits", source[i:j], start_ln, start_col))
            col += j - i
            i = j
        elif ch.isalpha():
            tokens.append(Token("letter", ch, start_ln, start_col))
            i, col = i + 1, col + 1
        elif ch in _SYM_CHARS:
            tokens.append(Token("sym", ch, start_ln, start_col))
            i, col = i + 1, col + 1
        else:
            raise ParseError(f"character {ch!r} not in math grammar", start_ln, start_col)
    return tokens


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Slot:
    index: int
    min_prec: int = 0  # bracket children below this precedence


@dataclass(frozen=True)
class FlexJoin:
    separator: tuple  # tuple of token texts, non-empty


def parse_template(source, line=1, column=1):
    """Parse template source into (tokens, arity).

    arity is None for flexary templates, else the fixed argument count
    (0 for constant symbols).  Enforces the template invariants: a single
    flexary join excludes numbered slots; fixed slots must cover 1..n.
    """
    tokens = []
    i, ln, col = 0, line, column
    n = len(source)
    plain = []  # pending literal text run

    def flush(upto_ln, upto_col):
        if plain:
            for tok in lex_math("".join(plain), upto_ln, upto_col):
                tokens.append(Literal(tok.text))
            plain.clear()

    run_ln, run_col = ln, col
    while i < n:
        ch = source[i]
        if ch == "#":
            flush(run_ln, run_col)
            i += 1
            col += 1
            if i < n and source[i] == "*":
                i += 1
                col += 1
                if i >= n or source[i] != "[":
                    raise ParseError("flexary join needs [separator]", ln, col)
                end = source.find("]", i + 1)
                if end < 0:
                    raise ParseError("unterminated flexary separator", ln, col)
                sep_src = source[i + 1 : end]
                sep = tuple(t.text for t in lex_math(sep_src, ln, col + 1))
                if not sep:
                    raise ParseError("empty flexary separator", ln, col)
                tokens.append(FlexJoin(sep))
                col += end - i + 1
                i = end + 1
            elif i < n and source[i].isdigit():
                j = i
                while j < n and source[j].isdigit():
                    j += 1
                index = int(source[i:j])
                col += j - i
                i = j
                min_prec = 0
                if i < n and source[i] == "!":
                    i += 1
                    col += 1
                    j = i
                    while j < n and source[j].isdigit():
                        j += 1
                    if j == i:
                        raise ParseError("expected precedence digits after '!'", ln, col)
                    min_prec = int(source[i:j])
                    col += j - i
                    i = j
                if index < 1:
                    raise ParseError("slot indices are 1-based", ln, col)
                tokens.append(Slot(index, min_prec))
            else:
                raise ParseError("expected slot number or '*' after '#'", ln, col)
            run_ln, run_col = ln, col
        elif ch == "\n":
            plain.append(ch)
            i, ln, col = i + 1, ln + 1, 1
        else:
            plain.append(ch)
            i, col = i + 1, col + 1
    flush(run_ln, run_col)

    try:
        arity = template_arity(tokens)
    except ValueError as e:
        raise ParseError(str(e), line, column) from None
    return tuple(tokens), arity


def template_arity(tokens):
    """Arity a token sequence declares (None = flexary).

    Raises ValueError when the shape is unusable: several joins, joins mixed
    with slots, slot indices not covering 1..n exactly once each (a repeated
    slot could not keep presentation and content in bijection).
    """
    joins = [t for t in tokens if isinstance(t, FlexJoin)]
    slots = [t for t in tokens if isinstance(t, Slot)]
    if joins:
        if len(joins) > 1:
            raise ValueError("template has more than one flexary join")
        if slots:
            raise ValueError("flexary template cannot carry numbered slots")
        return None
    indices = sorted(s.index for s in slots)
    arity = indices[-1] if indices else 0
    if indices != list(range(1, arity + 1)):
        raise ValueError(f"template slots must cover #1..#{arity} exactly once each")
    return arity


def template_source(tokens):
    """Reconstruct canonical template source from tokens (XML serialization aid)."""
    parts = []
    for tok in tokens:
        if isinstance(tok, Literal):
            parts.append(tok.text)
        elif isinstance(tok, Slot):
            parts.append(f"#{tok.index}" + (f"!{tok.min_prec}" if tok.min_prec else ""))
        else:
            parts.append("#*[" + " ".join(tok.separator) + "]")
    return " ".join(parts)


# TeX control words the renderer maps to Unicode.  `\atop`, `\mathcal` and the
# bare `^`/`_` tokens are structural and handled by the layout pass instead.
TEX_UNICODE = {
    "\\cup": "∪",
    "\\cap": "∩",
    "\\emptyset": "∅",
    "\\subseteq": "⊆",
    "\\subset": "⊂",
    "\\in": "∈",
    "\\notin": "∉",
    "\\vDash": "⊨",
    "\\models": "⊨",
    "\\vdash": "⊢",
    "\\times": "×",
    "\\cdot": "⋅",
    "\\circ": "∘",
    "\\wedge": "∧",
    "\\vee": "∨",
    "\\neg": "¬",
    "\\forall": "∀",
    "\\exists": "∃",
    "\\le": "≤",
    "\\leq": "≤",
    "\\ge": "≥",
    "\\geq": "≥",
    "\\neq": "≠",
    "\\to": "→",
    "\\rightarrow": "→",
    "\\mapsto": "↦",
    "\\infty": "∞",
    "\\pm": "±",
    "\\setminus": "∖",
}

# Script capitals: most map into the Mathematical Alphanumeric block, a few
# live in Letterlike Symbols.
_SCRIPT_EXCEPTIONS = {
    "B": "ℬ", "E": "ℰ", "F": "ℱ", "H": "ℋ",
    "I": "ℐ", "L": "ℒ", "M": "ℳ", "R": "ℛ",
}


def mathcal_char(letter):
    if letter in _SCRIPT_EXCEPTIONS:
        return _SCRIPT_EXCEPTIONS[letter]
    if "A" <= letter <= "Z":
        return chr(0x1D49C + ord(letter) - ord("A"))
    return letter
