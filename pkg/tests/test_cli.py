"""CLI subcommands, driven through main(argv)."""

import json
import os

from corpus import GOLDEN, SETS
from lectures.cli import main


def _write_corpus(directory):
    os.makedirs(directory, exist_ok=True)
    for name, text in GOLDEN.items():
        with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
            fh.write(text)


def test_build(tmp_path, capsys):
    src = str(tmp_path / "src")
    out = str(tmp_path / "out")
    _write_corpus(src)
    assert main(["build", src, "-o", out]) == 0
    for name in ("collection.omdoc", "all.ttl", "ontology.ttl",
                 "sets.omdoc", "sets.xhtml", "sets.nt"):
        assert os.path.exists(os.path.join(out, name)), name
    assert "built 5 theories" in capsys.readouterr().out


def test_build_reports_errors(tmp_path, capsys):
    src = tmp_path / "src"
    src.mkdir()
    (src / "bad.stex").write_text(r"\begin{module}[id=bad]\begin{example}[for=ghost]x\end{example}\end{module}")
    assert main(["build", str(src)]) == 1
    assert "ghost" in capsys.readouterr().err


def test_validate_ok(tmp_path, capsys):
    src = str(tmp_path / "src")
    _write_corpus(src)
    assert main(["validate", src]) == 0
    assert "5 theories valid" in capsys.readouterr().out


def test_commit_and_query(tmp_path, capsys):
    src = tmp_path / "src"
    _write_corpus(str(src))
    repo = str(tmp_path / "repo")
    files = [str(src / name) for name in sorted(GOLDEN)]
    assert main(["commit", repo, *files, "-m", "golden", "--author", "t"]) == 0
    assert "accepted revision 1" in capsys.readouterr().out

    assert main(["query", repo, "--gaps"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "http://ex.org/omdoc/combinat#binom" in payload["concepts_without_examples"]

    assert main(["query", repo, "--examples-for", "graphs",
                 "--prereq", "formal-languages"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pairs"] == [{
        "concept": "http://ex.org/omdoc/graphs#tree",
        "example": "http://ex.org/omdoc/formal-languages#parse-tree-ex"}]


def test_commit_rejection_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.stex"
    bad.write_text(r"\begin{module}[id=bad]\begin{example}[for=ghost]x\end{example}\end{module}")
    repo = str(tmp_path / "repo")
    assert main(["commit", repo, str(bad), "-m", "broken"]) == 1
    assert "rejected" in capsys.readouterr().err
    # repository left at revision 0
    assert json.load(open(os.path.join(repo, "manifest.json")))["head"] == 0


def test_commit_delete_flag(tmp_path, capsys):
    src = tmp_path / "sets.stex"
    src.write_text(SETS)
    repo = str(tmp_path / "repo")
    assert main(["commit", repo, str(src), "-m", "add"]) == 0
    assert main(["commit", repo, "--delete", "sets.stex", "-m", "rm"]) == 0
    out = capsys.readouterr().out
    assert "accepted revision 2" in out


def test_query_without_revisions(tmp_path, capsys):
    repo = str(tmp_path / "repo")
    os.makedirs(repo)
    assert main(["commit", repo, "-m", "noop"]) == 1  # nothing to commit
    assert main(["query", repo, "--gaps"]) == 1
