"""Versioned document repository with a commit-time build/validation hook.

Layout on disk (append-only snapshots, everything inspectable):

    <root>/lectures.conf          key=value config
    <root>/manifest.json          {"head": N}
    <root>/revisions/N/meta.json  number, author, message, timestamp, files
    <root>/revisions/N/files/…    committed sources, exact bytes
    <root>/revisions/N/derived/   collection.omdoc + per-theory .omdoc/.xhtml/.nt

Each commit rebuilds the whole corpus (parse -> resolve -> validate ->
render -> extract).  Any failure rejects the commit and leaves HEAD
untouched; a success writes an immutable revision and swaps the in-memory
serving state atomically.
"""

import json
import os
import threading
import time
from dataclasses import dataclass, field

from .errors import FormatError, MissingNotation, ParseError, RepoError, ResolveError
from .model import theory_uri, validate
from .omdoc_xml import theory_projection_xml, to_xml
from .query import Store
from .rdf import Vocabulary, extract, restrict_to_theory, serialize_ntriples
from .render import context_for, render_document
from .stex import parse_module, resolve

CONFIG_NAME = "lectures.conf"

_DEFAULTS = {
    "base_uri": "http://ex.org",
    "ontology_namespace": "http://ex.org/ontology#",
    "port": "8080",
    "host": "127.0.0.1",
}


@dataclass
class Config:
    base_uri: str = _DEFAULTS["base_uri"]
    ontology_namespace: str = _DEFAULTS["ontology_namespace"]
    port: int = 8080
    host: str = "127.0.0.1"


def parse_config(text):
    """Parse key=value config lines (quotes optional, # comments)."""
    values = dict(_DEFAULTS)
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise RepoError(f"config line {lineno}: expected key=value")
        key = key.strip()
        value = value.strip().strip('"')
        if key not in values:
            raise RepoError(f"config line {lineno}: unknown key '{key}'")
        values[key] = value
    try:
        port = int(values["port"])
    except ValueError:
        raise RepoError(f"config: port must be an integer, got {values['port']!r}") from None
    return Config(values["base_uri"], values["ontology_namespace"], port, values["host"])


def config_text(config):
    return (f'base_uri = "{config.base_uri}"\n'
            f'ontology_namespace = "{config.ontology_namespace}"\n'
            f"port = {config.port}\n"
            f'host = "{config.host}"\n')


# ---------------------------------------------------------------------------
# Pipeline


@dataclass
class Derived:
    xml: str
    xhtml: str
    nt: str
    triples: frozenset


@dataclass
class BuildResult:
    collection: object = None
    artifacts: dict = field(default_factory=dict)  # theory id -> Derived
    triples: frozenset = frozenset()
    errors: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.errors


def build(files, base_uri, vocab):
    """Run the full pipeline over a path->source mapping."""
    result = BuildResult()
    modules = []
    for path in sorted(files):
        if not path.endswith(".stex"):
            continue
        try:
            modules.append(parse_module(files[path]))
        except ParseError as e:
            result.errors.append(ParseError(f"{path}: {e.message}", e.line, e.column))
    if result.errors:
        return result
    try:
        collection = resolve(modules, base_uri)
    except ResolveError as e:
        result.errors.append(e)
        return result
    violations = validate(collection)
    if violations:
        result.errors.extend(violations)
        return result
    ctx = context_for(collection)
    triples = extract(collection, vocab)
    artifacts = {}
    for tid in collection.theories:
        theory = collection.theories[tid]
        try:
            xhtml = render_document(theory, collection, ctx, vocab.namespace)
        except MissingNotation as e:
            result.errors.append(e)
            return result
        own = restrict_to_theory(triples, theory_uri(base_uri, tid))
        artifacts[tid] = Derived(theory_projection_xml(collection, tid),
                                 xhtml, serialize_ntriples(own), own)
    result.collection = collection
    result.artifacts = artifacts
    result.triples = triples
    return result


# ---------------------------------------------------------------------------
# Repository


@dataclass
class Revision:
    number: int
    author: str
    message: str
    timestamp: float
    files: dict  # path -> source text
    derived: dict  # theory id -> Derived


@dataclass
class Accepted:
    revision: int


@dataclass
class Rejected:
    errors: list  # Violation | ParseError | ResolveError | MissingNotation


@dataclass
class RevisionState:
    """Immutable serving snapshot; swapped atomically on commit."""
    number: int
    collection: object
    artifacts: dict
    triples: frozenset
    store: Store


def _check_path(path):
    if not path or path.startswith(("/", "\\")) or ".." in path.split("/"):
        raise RepoError(f"illegal repository path {path!r}")
    return path


class Repository:
    """Append-only revision store; one writer at a time, atomic HEAD swap."""

    def __init__(self, root, config):
        self.root = root
        self.config = config
        self.vocab = Vocabulary(config.ontology_namespace)
        self._lock = threading.Lock()
        self._states = {}  # revision number -> RevisionState (lazy cache)
        self.head = 0
        self.current = None  # RevisionState | None

    # -- construction

    @classmethod
    def create(cls, root, config=None):
        config = config or Config()
        os.makedirs(os.path.join(root, "revisions"), exist_ok=True)
        conf_path = os.path.join(root, CONFIG_NAME)
        if not os.path.exists(conf_path):
            with open(conf_path, "w", encoding="utf-8") as fh:
                fh.write(config_text(config))
        manifest = os.path.join(root, "manifest.json")
        if not os.path.exists(manifest):
            _write_json(manifest, {"head": 0})
        return cls.open(root)

    @classmethod
    def open(cls, root):
        conf_path = os.path.join(root, CONFIG_NAME)
        manifest_path = os.path.join(root, "manifest.json")
        if not os.path.exists(manifest_path):
            raise RepoError(f"no repository at {root} (missing manifest.json)")
        with open(conf_path, encoding="utf-8") as fh:
            config = parse_config(fh.read())
        repo = cls(root, config)
        with open(manifest_path, encoding="utf-8") as fh:
            repo.head = int(json.load(fh)["head"])
        if repo.head:
            repo.current = repo.state_at(repo.head)
        return repo

    # -- revision access

    def _rev_dir(self, number):
        return os.path.join(self.root, "revisions", str(number))

    def _require_rev(self, number):
        if not isinstance(number, int) or number < 1 or number > self.head:
            raise RepoError(f"no such revision {number}")

    def files_at(self, number):
        if number == 0:
            return {}
        self._require_rev(number)
        meta = _read_json(os.path.join(self._rev_dir(number), "meta.json"))
        files = {}
        for path in meta["files"]:
            full = os.path.join(self._rev_dir(number), "files", path)
            with open(full, encoding="utf-8") as fh:
                files[path] = fh.read()
        return files

    def revision(self, number):
        self._require_rev(number)
        meta = _read_json(os.path.join(self._rev_dir(number), "meta.json"))
        state = self.state_at(number)
        return Revision(meta["number"], meta["author"], meta["message"],
                        meta["timestamp"], self.files_at(number), state.artifacts)

    def state_at(self, number):
        """Serving state of a revision (rebuilt from sources, cached)."""
        self._require_rev(number)
        cached = self._states.get(number)
        if cached is not None:
            return cached
        result = build(self.files_at(number), self.config.base_uri, self.vocab)
        if not result.ok:
            raise RepoError(f"revision {number} no longer builds: {result.errors[0]}")
        state = RevisionState(number, result.collection, result.artifacts,
                              result.triples, _make_store(result, self.vocab))
        self._states[number] = state
        return state

    def checkout(self, path, number):
        """Exact committed bytes of a path at a revision."""
        self._require_rev(number)
        files = self.files_at(number)
        if path not in files:
            raise RepoError(f"path {path!r} does not exist at revision {number}")
        return files[path]

    # -- commit

    def commit(self, changes, author, message):
        """Apply changes (path -> source, or None to delete), gate, snapshot."""
        with self._lock:
            files = self.files_at(self.head) if self.head else {}
            for path, content in changes.items():
                _check_path(path)
                if content is None:
                    files.pop(path, None)
                else:
                    files[path] = content
            result = build(files, self.config.base_uri, self.vocab)
            if not result.ok:
                return Rejected(result.errors)
            number = self.head + 1
            self._write_revision(number, files, result, author, message)
            state = RevisionState(number, result.collection, result.artifacts,
                                  result.triples, _make_store(result, self.vocab))
            self._states[number] = state
            self.head = number
            self.current = state
            return Accepted(number)

    def _write_revision(self, number, files, result, author, message):
        tmp = os.path.join(self.root, "revisions", f".tmp-{number}")
        if os.path.exists(tmp):
            _rmtree(tmp)
        files_dir = os.path.join(tmp, "files")
        derived_dir = os.path.join(tmp, "derived")
        os.makedirs(files_dir)
        os.makedirs(derived_dir)
        for path, content in files.items():
            full = os.path.join(files_dir, path)
            os.makedirs(os.path.dirname(full), exist_ok=True)
            with open(full, "w", encoding="utf-8") as fh:
                fh.write(content)
        with open(os.path.join(derived_dir, "collection.omdoc"), "w",
                  encoding="utf-8") as fh:
            fh.write(to_xml(result.collection))
        for tid, derived in result.artifacts.items():
            for ext, text in (("omdoc", derived.xml), ("xhtml", derived.xhtml),
                              ("nt", derived.nt)):
                with open(os.path.join(derived_dir, f"{tid}.{ext}"), "w",
                          encoding="utf-8") as fh:
                    fh.write(text)
        _write_json(os.path.join(tmp, "meta.json"), {
            "number": number,
            "author": author,
            "message": message,
            "timestamp": time.time(),
            "files": sorted(files),
        })
        final = self._rev_dir(number)
        if os.path.exists(final):
            raise RepoError(f"revision {number} already exists")
        os.rename(tmp, final)
        _write_json(os.path.join(self.root, "manifest.json"), {"head": number})

    def derived_path(self, number, name):
        return os.path.join(self._rev_dir(number), "derived", name)


def _make_store(result, vocab):
    store = Store({"o": vocab.namespace, "rdf":
                   "http://www.w3.org/1999/02/22-rdf-syntax-ns#"})
    store.load(result.triples)
    return store


def _write_json(path, payload):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
    os.replace(tmp, path)


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _rmtree(path):
    for dirpath, dirnames, filenames in os.walk(path, topdown=False):
        for name in filenames:
            os.unlink(os.path.join(dirpath, name))
        for name in dirnames:
            os.rmdir(os.path.join(dirpath, name))
    os.rmdir(path)


def describe_error(err):
    """Uniform error rendering for CLI output and the commit endpoint."""
    kind = type(err).__name__
    if isinstance(err, FormatError):
        return {"type": kind, "message": str(err)}
    if hasattr(err, "code") and hasattr(err, "subject"):
        return {"type": "Violation", "code": err.code, "subject": err.subject,
                "message": err.message}
    return {"type": kind, "message": str(err)}
