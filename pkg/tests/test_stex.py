"""stex surface parsing: modules, options, prose/math runs, proof steps."""

import pytest

from lectures.errors import ParseError
from lectures.model import ProseRun
from lectures.notation import FlexJoin, Literal, Slot
from lectures.stex import (MathRun, NotationVariantDecl, ProseBlock, SymDecl,
                           StatementEnv, parse_module)


def test_symdef_module():
    m = parse_module(r"\begin{module}[id=sets]\symdef{union}[prec=500]{#*[\cup]}\end{module}")
    assert m.id == "sets"
    assert m.body == (SymDecl("union", None, 500, (FlexJoin(("\\cup",)),)),)


def test_empty_module():
    m = parse_module(r"\begin{module}[id=empty]\end{module}")
    assert m.id == "empty"
    assert m.body == ()


def test_unclosed_environment_is_error():
    with pytest.raises(ParseError) as exc:
        parse_module(r"\begin{module}[id=x]\begin{example}\end{module}")
    assert "example" in str(exc.value)
    assert exc.value.line is not None


def test_default_precedence_is_1000():
    m = parse_module(r"\begin{module}[id=m]\symdef{c}{\emptyset}\end{module}")
    decl = m.body[0]
    assert decl.precedence == 1000
    assert decl.arity == 0


def test_fixed_arity_inferred_from_slots():
    m = parse_module(r"\begin{module}[id=m]\symdef{binom}{(#1 \atop #2)}\end{module}")
    assert m.body[0].arity == 2
    assert m.body[0].template == (Literal("("), Slot(1, 0), Literal("\\atop"),
                                  Slot(2, 0), Literal(")"))


def test_slot_precedence_requirement():
    m = parse_module(r"\begin{module}[id=m]\symdef{w}{#1!600 + #2}\end{module}")
    assert m.body[0].template[0] == Slot(1, 600)


def test_imports_and_order():
    m = parse_module(r"""
\begin{module}[id=a]
  \importmodule{b}
  \importmodule{c}
\end{module}""")
    assert m.imports == ("b", "c")


def test_statement_with_prose_and_math():
    m = parse_module(r"""
\begin{module}[id=m]
  \symdef{union}[prec=500]{#*[\cup]}
  \begin{definition}[id=d, for=union]
    The union % inline comment
    $\union{A,B}$ of two sets.
  \end{definition}
\end{module}""")
    st = m.body[1]
    assert isinstance(st, StatementEnv)
    assert st.kind == "definition"
    assert st.for_refs == ("union",)
    kinds = [type(run).__name__ for run in st.content]
    assert kinds == ["ProseRun", "MathRun", "ProseRun"]
    assert st.content[0] == ProseRun("The union ")  # space kept before math
    assert st.content[1].source == r"\union{A,B}"
    assert st.content[2] == ProseRun(" of two sets.")


def test_multi_target_for():
    m = parse_module(r"""
\begin{module}[id=m]
  \begin{example}[id=e, for=a,b]
    text
  \end{example}
\end{module}""")
    assert m.body[0].for_refs == ("a", "b")


def test_proof_steps():
    m = parse_module(r"""
\begin{module}[id=m]
  \begin{proof}[id=p, for=t]
    Setup prose.
    \step[just=lemma-1]{First with $x$.}
    \step{Second.}
  \end{proof}
\end{module}""")
    proof = m.body[0]
    assert [run.text for run in proof.content] == ["Setup prose."]
    assert len(proof.steps) == 2
    assert proof.steps[0].justification == "lemma-1"
    assert proof.steps[0].content[1] == MathRun("x")
    assert proof.steps[1].justification is None


def test_prose_after_steps_rejected():
    with pytest.raises(ParseError):
        parse_module(r"""
\begin{module}[id=m]
  \begin{proof}[id=p]
    \step{One.}
    stray prose
  \end{proof}
\end{module}""")


def test_step_outside_proof_rejected():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=m]\begin{theorem}\step{x}\end{theorem}\end{module}")


def test_unknown_environment():
    with pytest.raises(ParseError) as exc:
        parse_module(r"\begin{module}[id=m]\begin{remark}\end{remark}\end{module}")
    assert "remark" in str(exc.value)


def test_unknown_option_is_error():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=m]\begin{example}[typo=x]\end{example}\end{module}")


def test_duplicate_symbol_name():
    with pytest.raises(ParseError) as exc:
        parse_module(r"\begin{module}[id=m]\symdef{u}{\cup}\symdef{u}{\cap}\end{module}")
    assert "duplicate symbol" in str(exc.value)


def test_malformed_module_id():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=9bad]\end{module}")


def test_unbalanced_braces():
    with pytest.raises(ParseError):
        parse_module("\\begin{module}[id=m]\\symdef{u}{\\cup\n")


def test_unterminated_math_run():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=m]\begin{example}runs $x forever\end{example}\end{module}")


def test_content_after_end_is_error():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=a]\end{module}\begin{module}[id=b]\end{module}")


def test_escaped_dollar_and_percent_in_prose():
    m = parse_module(r"\begin{module}[id=m]\begin{example}costs \$5 or 3\%\end{example}\end{module}")
    assert m.body[0].content == (ProseRun("costs $5 or 3%"),)


def test_unknown_command_in_prose():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=m]\begin{example}uses \frac{1}{2}\end{example}\end{module}")


def test_variant_declaration_and_redefinition_warning():
    m = parse_module(r"""
\begin{module}[id=m]
  \symdef{binom}{(#1 \atop #2)}
  \symvariant{binom}{fr}{\mathcal{C}^{#2}_{#1}}
  \symvariant{binom}{fr}{\mathcal{K}^{#2}_{#1}}
\end{module}""")
    variants = [b for b in m.body if isinstance(b, NotationVariantDecl)]
    assert len(variants) == 2
    assert len(m.warnings) == 1
    assert "last declaration wins" in m.warnings[0]


def test_variant_for_undeclared_symbol():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=m]\symvariant{ghost}{fr}{#1}\end{module}")


def test_variant_arity_mismatch():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=m]\symdef{f}{\cup #1}\symvariant{f}{v}{#1 #2}\end{module}")


def test_duplicate_slot_rejected():
    with pytest.raises(ParseError):
        parse_module(r"\begin{module}[id=m]\symdef{f}{#1 + #1}\end{module}")


def test_module_level_prose_block():
    m = parse_module(r"\begin{module}[id=m]Intro text with $x$.\end{module}")
    block = m.body[0]
    assert isinstance(block, ProseBlock)
    assert block.runs[0] == ProseRun("Intro text with ")


def test_parse_is_deterministic():
    src = r"""
\begin{module}[id=m]
  \symdef{union}[prec=500]{#*[\cup]}
  \begin{example}[for=union]$\union{A,B}$\end{example}
\end{module}"""
    assert parse_module(src) == parse_module(src)
