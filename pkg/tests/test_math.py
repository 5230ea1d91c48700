"""parse_math: macro calls, variables, integers, notation readback."""

import pytest

from lectures.errors import ParseError
from lectures.model import Apply, Int, Sym, Var
from lectures.notation import parse_template
from lectures.stex import Scope, ScopeSymbol, parse_math

UNION = Sym("sets", "union")
BINOM = Sym("combinat", "binom")


@pytest.fixture(scope="module")
def scope():
    def tmpl(source):
        return parse_template(source)[0]
    return Scope([
        ScopeSymbol("sets", "union", None, 500, tmpl(r"#*[\cup]")),
        ScopeSymbol("combinat", "binom", 2, 900, tmpl(r"(#1 \atop #2)"),
                    (("fr", tmpl(r"\mathcal{C}^{#2}_{#1}")),)),
        ScopeSymbol("sets", "emptyset", 0, 1000, tmpl(r"\emptyset")),
    ])


def test_flexary_macro_call(scope):
    assert parse_math(r"\union{A,B,C}", scope) == \
        Apply(UNION, (Var("A"), Var("B"), Var("C")))


def test_bare_variable(scope):
    assert parse_math("x", scope) == Var("x")


def test_fixed_macro_call_with_two_groups(scope):
    assert parse_math(r"\binom{7}{2}", scope) == Apply(BINOM, (Int(7), Int(2)))


def test_fixed_macro_call_single_group(scope):
    assert parse_math(r"\binom{7,2}", scope) == Apply(BINOM, (Int(7), Int(2)))


def test_integer_literal(scope):
    assert parse_math("42", scope) == Int(42)


def test_nullary_symbol(scope):
    assert parse_math(r"\emptyset", scope) == Sym("sets", "emptyset")


def test_notation_readback_infix(scope):
    assert parse_math(r"A \cup B \cup C", scope) == \
        Apply(UNION, (Var("A"), Var("B"), Var("C")))


def test_notation_readback_closed(scope):
    assert parse_math(r"(7 \atop 2)", scope) == Apply(BINOM, (Int(7), Int(2)))


def test_notation_readback_variant(scope):
    assert parse_math(r"\mathcal{C}^{2}_{7}", scope) == Apply(BINOM, (Int(7), Int(2)))


def test_grouping_parens(scope):
    assert parse_math(r"(A \cup B)", scope) == Apply(UNION, (Var("A"), Var("B")))


def test_flexary_nested_macro(scope):
    assert parse_math(r"\union{\union{A,B},C}", scope) == \
        Apply(UNION, (Apply(UNION, (Var("A"), Var("B"))), Var("C")))


def test_unknown_macro(scope):
    with pytest.raises(ParseError) as exc:
        parse_math(r"\nosuch{x}", scope)
    assert "unknown macro" in str(exc.value)


def test_arity_mismatch(scope):
    with pytest.raises(ParseError) as exc:
        parse_math(r"\binom{7}", scope)
    assert "expects 2" in str(exc.value)


def test_empty_argument_list(scope):
    with pytest.raises(ParseError) as exc:
        parse_math(r"\union{}", scope)
    assert "empty argument" in str(exc.value)


def test_flexary_single_argument_ok(scope):
    assert parse_math(r"\union{A}", scope) == Apply(UNION, (Var("A"),))


def test_trailing_garbage(scope):
    with pytest.raises(ParseError):
        parse_math("x y", scope)


def test_error_location(scope):
    with pytest.raises(ParseError) as exc:
        parse_math(r"\union{A,\nosuch}", scope)
    assert exc.value.line == 1
    assert exc.value.column == 10


def test_ambiguous_reference_two_theories():
    def tmpl(source):
        return parse_template(source)[0]
    scope = Scope([
        ScopeSymbol("a", "op", 1, 100, tmpl(r"\circ #1")),
        ScopeSymbol("b", "op", 1, 100, tmpl(r"\cdot #1")),
    ])
    with pytest.raises(ParseError) as exc:
        parse_math(r"\op{x}", scope)
    assert "ambiguous" in str(exc.value)
