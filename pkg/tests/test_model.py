"""validate and the URI scheme."""

from corpus import BASE
from lectures.model import (Apply, Formula, Int, Ref, Statement, Sym,
                            SymbolInfo, Theory, TheoryCollection, Var,
                            entities, statement_uri, step_uri, symbol_uri,
                            theory_uri, uri_for, validate)
from lectures.notation import parse_template


def _tmpl(source):
    return parse_template(source)[0]


def _theory(tid, imports=(), symbols=(), statements=()):
    return Theory(tid, tuple(imports), tuple(symbols), tuple(statements))


def _coll(*theories):
    return TheoryCollection(BASE, {t.id: t for t in theories})


UNION = SymbolInfo("union", None, 500, _tmpl(r"#*[\cup]"))


def test_uri_scheme():
    assert theory_uri(BASE, "sets") == "http://ex.org/omdoc/sets"
    assert symbol_uri(BASE, "sets", "union") == "http://ex.org/omdoc/sets#union"
    assert statement_uri(BASE, "sets", "union-def") == "http://ex.org/omdoc/sets#union-def"
    assert step_uri(BASE, "graphs", "pf-1", 2) == "http://ex.org/omdoc/graphs#pf-1.2"


def test_uri_for_dispatch():
    assert uri_for(("theory", "sets"), BASE) == theory_uri(BASE, "sets")
    assert uri_for(("symbol", "sets", "union"), BASE) == symbol_uri(BASE, "sets", "union")
    assert uri_for(("step", "graphs", "pf-1", 2), BASE) == \
        "http://ex.org/omdoc/graphs#pf-1.2"


def test_uri_for_injective_on_golden(golden_collection):
    uris = [uri_for(e, BASE) for e in entities(golden_collection)]
    assert len(uris) == len(set(uris))


def test_trailing_slash_base_normalized():
    assert theory_uri("http://ex.org/", "sets") == "http://ex.org/omdoc/sets"


def test_valid_collection_no_violations(golden_collection):
    assert validate(golden_collection) == []


def test_validate_pure_and_idempotent(golden_collection):
    assert validate(golden_collection) == validate(golden_collection)


def test_definition_without_targets():
    bad = _coll(_theory("m", symbols=[UNION], statements=[
        Statement("d", "definition")]))
    codes = [v.code for v in validate(bad)]
    assert codes == ["DanglingRef"]


def test_definition_target_must_be_symbol():
    bad = _coll(_theory("m", symbols=[UNION], statements=[
        Statement("t", "theorem"),
        Statement("d", "definition", (Ref("m", "t"),))]))
    assert any(v.code == "DanglingRef" and "not a symbol" in v.message
               for v in validate(bad))


def test_import_cycle_reported_once_at_least_id():
    bad = _coll(_theory("beta", imports=["alpha"]),
                _theory("alpha", imports=["beta"]))
    violations = [v for v in validate(bad) if v.code == "CyclicImport"]
    assert len(violations) == 1
    assert violations[0].subject == theory_uri(BASE, "alpha")


def test_missing_import_is_dangling():
    bad = _coll(_theory("m", imports=["ghost"]))
    assert [v.code for v in validate(bad)] == ["DanglingRef"]


def test_arity_mismatch():
    binom = SymbolInfo("binom", 2, 900, _tmpl(r"(#1 \atop #2)"))
    bad = _coll(_theory("m", symbols=[binom], statements=[
        Statement("e", "example", content=(
            Formula(Apply(Sym("m", "binom"), (Int(1),))),))]))
    assert any(v.code == "ArityMismatch" for v in validate(bad))


def test_unknown_symbol_in_formula():
    bad = _coll(_theory("m", statements=[
        Statement("e", "example", content=(Formula(Sym("m", "ghost")),))]))
    assert any(v.code == "DanglingRef" for v in validate(bad))


def test_duplicate_statement_and_symbol_ids():
    bad = _coll(_theory("m", symbols=[UNION], statements=[
        Statement("union", "example")]))
    assert any(v.code == "DuplicateId" for v in validate(bad))


def test_proof_without_theorem():
    bad = _coll(_theory("m", statements=[
        Statement("p", "proof")]))
    assert any(v.code == "ProofWithoutTheorem" for v in validate(bad))


def test_proof_target_must_be_theorem():
    bad = _coll(_theory("m", statements=[
        Statement("a", "axiom"),
        Statement("p", "proof", (Ref("m", "a"),))]))
    assert any(v.code == "ProofWithoutTheorem" for v in validate(bad))


def test_template_arity_coherence_checked():
    from lectures.notation import Slot
    broken = SymbolInfo("f", 2, 100, (Slot(1, 0),))  # covers only #1
    bad = _coll(_theory("m", symbols=[broken]))
    assert any(v.code == "ArityMismatch" for v in validate(bad))


def test_violations_sorted_deterministically():
    bad = _coll(
        _theory("zz", imports=["ghost"]),
        _theory("aa", statements=[Statement("p", "proof")]))
    violations = validate(bad)
    subjects = [v.subject for v in violations]
    assert subjects == sorted(subjects)
