"""Command line interface.

    lectures build <dir> [-o OUT] [--base URI]     offline pipeline to files
    lectures validate <dir> [--base URI]           parse/resolve/validate
    lectures serve --root REPO [--base URI] [--port N] [--host H]
    lectures commit <repo> <files...> -m MSG [--author A] [--delete PATH]
    lectures query <repo> --gaps
    lectures query <repo> --examples-for THEORY [--prereq THEORY ...]

Repository settings live in <repo>/lectures.conf (key = value); command
line flags override the file.
"""

import argparse
import glob
import json
import os
import sys

from .errors import RepoError
from .ontology import emit_ontology
from .query import examples_for, find_gaps
from .rdf import Vocabulary, serialize_turtle
from .repo import (Accepted, Config, Repository, build, describe_error,
                   parse_config)
from .server import serve


def _read_sources(directory):
    files = {}
    for path in sorted(glob.glob(os.path.join(directory, "*.stex"))):
        with open(path, encoding="utf-8") as fh:
            files[os.path.basename(path)] = fh.read()
    return files


def _print_errors(errors):
    for err in errors:
        info = describe_error(err)
        if info["type"] == "Violation":
            print(f"violation {info['code']} at {info['subject']}: {info['message']}",
                  file=sys.stderr)
        else:
            print(f"{info['type']}: {info['message']}", file=sys.stderr)


def cmd_build(args):
    files = _read_sources(args.dir)
    if not files:
        print(f"no .stex files in {args.dir}", file=sys.stderr)
        return 1
    vocab = Vocabulary(args.ontology_ns)
    result = build(files, args.base, vocab)
    if not result.ok:
        _print_errors(result.errors)
        return 1
    outdir = args.out or os.path.join(args.dir, "_build")
    os.makedirs(outdir, exist_ok=True)
    from .omdoc_xml import to_xml
    with open(os.path.join(outdir, "collection.omdoc"), "w", encoding="utf-8") as fh:
        fh.write(to_xml(result.collection))
    with open(os.path.join(outdir, "all.ttl"), "w", encoding="utf-8") as fh:
        fh.write(serialize_turtle(result.triples, vocab))
    with open(os.path.join(outdir, "ontology.ttl"), "w", encoding="utf-8") as fh:
        fh.write(emit_ontology(vocab))
    for tid, derived in result.artifacts.items():
        for ext, text in (("omdoc", derived.xml), ("xhtml", derived.xhtml),
                          ("nt", derived.nt)):
            with open(os.path.join(outdir, f"{tid}.{ext}"), "w", encoding="utf-8") as fh:
                fh.write(text)
    print(f"built {len(result.artifacts)} theories into {outdir}")
    return 0


def cmd_validate(args):
    files = _read_sources(args.dir)
    if not files:
        print(f"no .stex files in {args.dir}", file=sys.stderr)
        return 1
    result = build(files, args.base, Vocabulary(args.ontology_ns))
    if not result.ok:
        _print_errors(result.errors)
        return 1
    print(f"ok: {len(result.collection.theories)} theories valid")
    return 0


def _open_repo(root, create=False):
    manifest = os.path.join(root, "manifest.json")
    if not os.path.exists(manifest):
        if not create:
            raise RepoError(f"no repository at {root}")
        return Repository.create(root)
    return Repository.open(root)


def cmd_serve(args):
    repo = _open_repo(args.root, create=True)
    host = args.host or repo.config.host
    port = args.port if args.port is not None else repo.config.port
    if args.base:
        repo.config.base_uri = args.base
    print(f"serving {args.root} on http://{host}:{port} "
          f"(base {repo.config.base_uri})")
    try:
        serve(repo, host, port, static_dir=args.static)
    except KeyboardInterrupt:
        pass
    return 0


def cmd_commit(args):
    repo = _open_repo(args.repo, create=True)
    changes = {}
    for path in args.files:
        with open(path, encoding="utf-8") as fh:
            changes[os.path.basename(path)] = fh.read()
    for path in args.delete or []:
        changes[path] = None
    if not changes:
        print("nothing to commit", file=sys.stderr)
        return 1
    outcome = repo.commit(changes, args.author, args.message)
    if isinstance(outcome, Accepted):
        print(f"accepted revision {outcome.revision}")
        return 0
    print("commit rejected:", file=sys.stderr)
    _print_errors(outcome.errors)
    return 1


def cmd_query(args):
    repo = _open_repo(args.repo)
    if repo.current is None:
        print("repository has no revisions", file=sys.stderr)
        return 1
    store = repo.current.store
    if args.gaps:
        report = find_gaps(store, repo.vocab)
        print(json.dumps({
            "concepts_without_examples": list(report.concepts_without_examples),
            "unjustified_steps": list(report.unjustified_steps),
        }, indent=1))
        return 0
    if args.examples_for:
        from .model import theory_uri
        topic = theory_uri(repo.config.base_uri, args.examples_for)
        prereqs = [theory_uri(repo.config.base_uri, p) for p in args.prereq or []]
        pairs = examples_for(store, topic, prereqs, repo.vocab)
        print(json.dumps({"topic": topic,
                          "pairs": [{"concept": c, "example": e}
                                    for c, e in pairs]}, indent=1))
        return 0
    print("query needs --gaps or --examples-for", file=sys.stderr)
    return 1


def make_parser():
    parser = argparse.ArgumentParser(prog="lectures",
                                     description="Semantic lecture notes toolchain")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="compile a directory of .stex files")
    p.add_argument("dir")
    p.add_argument("-o", "--out")
    p.add_argument("--base", default="http://ex.org")
    p.add_argument("--ontology-ns", default="http://ex.org/ontology#")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="check a directory of .stex files")
    p.add_argument("dir")
    p.add_argument("--base", default="http://ex.org")
    p.add_argument("--ontology-ns", default="http://ex.org/ontology#")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the Linked Data server over a repository")
    p.add_argument("--root", required=True)
    p.add_argument("--base")
    p.add_argument("--port", type=int)
    p.add_argument("--host")
    p.add_argument("--static", help="directory of UI assets (default <root>/static)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("commit", help="commit files to a repository")
    p.add_argument("repo")
    p.add_argument("files", nargs="*")
    p.add_argument("-m", "--message", required=True)
    p.add_argument("--author", default=os.environ.get("USER", "anonymous"))
    p.add_argument("--delete", action="append", metavar="PATH")
    p.set_defaults(func=cmd_commit)

    p = sub.add_parser("query", help="run canned queries against a repository")
    p.add_argument("repo")
    p.add_argument("--gaps", action="store_true")
    p.add_argument("--examples-for", metavar="THEORY")
    p.add_argument("--prereq", action="append", metavar="THEORY")
    p.set_defaults(func=cmd_query)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except RepoError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
