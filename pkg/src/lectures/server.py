"""HTTP Linked Data frontend: content negotiation, queries, commits.

Routes (all JSON is UTF-8; media types negotiated via exact Accept match,
`*/*` defaults to XHTML):

    GET  /omdoc/{theory}[?rev=N][&notation=key]   omdoc+xml | turtle |
                                                  n-triples | xhtml
    GET  /ontology                                the vocabulary, turtle
    GET  /neighborhood?uri=U                      JSON (default) or turtle
    POST /query                                   {"patterns": […]} or
                                                  {"canned": …}
    GET  /gaps                                    didactic gap report
    GET  /examples-for?theory=T&prereq=P…         concept/example pairs
    GET  /checkout?path=P&rev=N                   committed bytes
    POST /commit                                  {"files": {...}, "author",
                                                  "message"}
    GET  /static/{file}                           UI assets from <root>/static

Concurrent GETs read one immutable revision snapshot each; commits are
serialized by the repository lock and swap the snapshot atomically, so a GET
in flight during a commit sees the old revision throughout.
"""

import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from .errors import ParseError, PatternError, RepoError, ResolveError
from .model import theory_uri
from .ontology import emit_ontology
from .query import Lit, examples_for, find_gaps, parse_patterns, select
from .rdf import Triple, serialize_turtle
from .render import render_document
from .repo import Accepted, describe_error

_STATIC_TYPES = {".js": "application/javascript", ".css": "text/css",
                 ".html": "text/html", ".map": "application/json",
                 ".svg": "image/svg+xml"}

XHTML_TYPE = "application/xhtml+xml"
OMDOC_TYPE = "application/omdoc+xml"
TURTLE_TYPE = "text/turtle"
NTRIPLES_TYPE = "application/n-triples"


def negotiate(accept_header):
    """Pick a representation: exact media-type match, */* -> xhtml."""
    tokens = [part.split(";")[0].strip().lower()
              for part in (accept_header or "*/*").split(",") if part.strip()]
    if OMDOC_TYPE in tokens:
        return "omdoc"
    if TURTLE_TYPE in tokens:
        return "turtle"
    if NTRIPLES_TYPE in tokens:
        return "ntriples"
    if XHTML_TYPE in tokens or "text/html" in tokens:
        return "xhtml"
    if "*/*" in tokens:
        return "xhtml"
    return None


def term_json(term):
    if isinstance(term, Lit):
        return {"type": "literal", "value": term.value}
    return {"type": "uri", "value": term}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "lectures/0.1"

    # -- helpers

    def log_message(self, fmt, *args):  # keep test output clean
        pass

    def _send(self, status, content_type, body):
        data = body.encode("utf-8") if isinstance(body, str) else body
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Connection", "close")  # desk scale; no keep-alive
        self.close_connection = True
        self.end_headers()
        self.wfile.write(data)

    def _json(self, payload, status=200):
        self._send(status, "application/json; charset=utf-8",
                   json.dumps(payload, indent=1, sort_keys=True))

    def _error(self, status, message):
        self._json({"error": message}, status=status)

    def _state(self, params):
        """Snapshot to serve this request from; honors ?rev=N."""
        repo = self.server.repo
        current = repo.current
        rev = params.get("rev", [None])[0]
        if rev is None:
            if current is None:
                raise _HttpError(404, "repository has no revisions yet")
            return current
        try:
            number = int(rev)
        except ValueError:
            raise _HttpError(400, f"bad revision {rev!r}") from None
        if number < 1 or number > repo.head:
            raise _HttpError(400, f"bad revision {number}")
        return repo.state_at(number)

    # -- routing

    def do_GET(self):
        try:
            self._route_get()
        except _HttpError as e:
            self._error(e.status, e.message)
        except RepoError as e:
            self._error(404, str(e))
        except BrokenPipeError:
            pass

    def do_POST(self):
        try:
            self._route_post()
        except _HttpError as e:
            self._error(e.status, e.message)
        except BrokenPipeError:
            pass

    def _route_get(self):
        url = urlsplit(self.path)
        params = parse_qs(url.query)
        path = url.path
        if path.startswith("/omdoc/"):
            return self._get_theory(path[len("/omdoc/"):], params)
        vocab = self.server.repo.vocab
        ns_path = urlsplit(vocab.namespace).path.rstrip("#/")
        if path == "/ontology" or (ns_path and path == ns_path):
            return self._send(200, TURTLE_TYPE, emit_ontology(vocab))
        if path == "/neighborhood":
            return self._get_neighborhood(params)
        if path == "/gaps":
            state = self._state(params)
            return self._json(_gaps_json(state, self.server.repo.vocab))
        if path == "/examples-for":
            return self._get_examples_for(params)
        if path == "/checkout":
            return self._get_checkout(params)
        if path.startswith("/static/"):
            return self._get_static(path[len("/static/"):])
        if path == "/":
            return self._get_index(params)
        raise _HttpError(404, f"no such resource {path}")

    def _route_post(self):
        url = urlsplit(self.path)
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            payload = json.loads(raw.decode("utf-8")) if raw else {}
        except (ValueError, UnicodeDecodeError):
            raise _HttpError(400, "request body is not valid JSON") from None
        if url.path == "/query":
            return self._post_query(payload, parse_qs(url.query))
        if url.path == "/commit":
            return self._post_commit(payload)
        raise _HttpError(404, f"no such resource {url.path}")

    # -- endpoints

    def _get_theory(self, tid, params):
        state = self._state(params)
        if tid not in state.collection.theories:
            raise _HttpError(404, f"no theory '{tid}'")
        kind = negotiate(self.headers.get("Accept"))
        if kind is None:
            raise _HttpError(406, "requested media type not supported")
        derived = state.artifacts[tid]
        repo = self.server.repo
        if kind == "omdoc":
            return self._send(200, OMDOC_TYPE, derived.xml)
        if kind == "turtle":
            return self._send(200, TURTLE_TYPE,
                              serialize_turtle(derived.triples, repo.vocab))
        if kind == "ntriples":
            return self._send(200, NTRIPLES_TYPE, derived.nt)
        notation = params.get("notation", [None])[0]
        if notation is None:
            return self._send(200, XHTML_TYPE, derived.xhtml)
        from .render import context_for
        ctx = context_for(state.collection, variant=notation)
        page = render_document(state.collection.theories[tid], state.collection,
                               ctx, repo.vocab.namespace)
        return self._send(200, XHTML_TYPE, page)

    def _get_neighborhood(self, params):
        state = self._state(params)
        uri = params.get("uri", [None])[0]
        if not uri:
            raise _HttpError(400, "missing ?uri= parameter")
        triples = _neighborhood(state.triples, uri)
        if not triples:
            raise _HttpError(404, f"unknown resource {uri}")
        accept = negotiate(self.headers.get("Accept"))
        if accept == "turtle":
            return self._send(200, TURTLE_TYPE,
                              serialize_turtle(triples, self.server.repo.vocab))
        rows = [{"s": t.s, "p": t.p, "o": t.o, "literal": t.literal}
                for t in sorted(triples)]
        return self._json({"uri": uri, "triples": rows})

    def _get_examples_for(self, params):
        state = self._state(params)
        repo = self.server.repo
        theory = params.get("theory", [None])[0]
        if not theory:
            raise _HttpError(400, "missing ?theory= parameter")
        topic = _theory_param(theory, repo)
        prereqs = [_theory_param(p, repo) for p in params.get("prereq", [])]
        pairs = examples_for(state.store, topic, prereqs, repo.vocab)
        return self._json({"topic": topic,
                           "pairs": [{"concept": c, "example": e} for c, e in pairs]})

    def _get_checkout(self, params):
        repo = self.server.repo
        path = params.get("path", [None])[0]
        rev = params.get("rev", [None])[0]
        if not path or rev is None:
            raise _HttpError(400, "need ?path= and ?rev=")
        try:
            number = int(rev)
        except ValueError:
            raise _HttpError(400, f"bad revision {rev!r}") from None
        if number < 1 or number > repo.head:
            raise _HttpError(400, f"bad revision {number}")
        try:
            text = repo.checkout(path, number)
        except RepoError as e:
            raise _HttpError(404, str(e)) from None
        return self._send(200, "text/plain; charset=utf-8", text)

    def _get_static(self, name):
        if "/" in name or name.startswith("."):
            raise _HttpError(404, "no such asset")
        static_dir = self.server.static_dir
        full = os.path.join(static_dir, name) if static_dir else None
        if not full or not os.path.isfile(full):
            raise _HttpError(404, f"no such asset {name}")
        ext = os.path.splitext(name)[1]
        with open(full, "rb") as fh:
            data = fh.read()
        return self._send(200, _STATIC_TYPES.get(ext, "application/octet-stream"), data)

    def _get_index(self, params):
        repo = self.server.repo
        if repo.current is None:
            return self._send(200, "text/html",
                              "<html><body><p>empty repository</p></body></html>")
        state = self._state(params)
        items = "".join(
            f'<li><a href="/omdoc/{tid}">{tid}</a></li>'
            for tid in sorted(state.collection.theories))
        body = (f"<html><body><h1>Lecture notes (revision {state.number})</h1>"
                f"<ul>{items}</ul></body></html>")
        return self._send(200, "text/html", body)

    def _post_query(self, payload, params):
        state = self._state(params)
        repo = self.server.repo
        if "patterns" in payload:
            try:
                patterns = parse_patterns(payload["patterns"], state.store.namespaces)
                rows = select(state.store, patterns)
            except PatternError as e:
                raise _HttpError(400, str(e)) from None
            bindings = [{var.lstrip("?"): term_json(val) for var, val in row.items()}
                        for row in rows]
            return self._json({"bindings": bindings})
        canned = payload.get("canned")
        if canned == "gaps":
            return self._json(_gaps_json(state, repo.vocab))
        if canned == "examples-for":
            theory = payload.get("theory")
            if not theory:
                raise _HttpError(400, "canned examples-for needs 'theory'")
            topic = _theory_param(theory, repo)
            prereqs = [_theory_param(p, repo) for p in payload.get("prereqs", [])]
            pairs = examples_for(state.store, topic, prereqs, repo.vocab)
            return self._json({"topic": topic,
                               "pairs": [{"concept": c, "example": e} for c, e in pairs]})
        raise _HttpError(400, "body needs 'patterns' or a known 'canned' query")

    def _post_commit(self, payload):
        repo = self.server.repo
        files = payload.get("files")
        if not isinstance(files, dict) or not files:
            raise _HttpError(400, "commit needs a non-empty 'files' object")
        author = payload.get("author", "anonymous")
        message = payload.get("message", "")
        try:
            outcome = repo.commit(files, author, message)
        except RepoError as e:
            raise _HttpError(400, str(e)) from None
        if isinstance(outcome, Accepted):
            return self._json({"accepted": True, "revision": outcome.revision})
        return self._json({"accepted": False,
                           "errors": [describe_error(e) for e in outcome.errors]},
                          status=422)


class _HttpError(Exception):
    def __init__(self, status, message):
        self.status = status
        self.message = message
        super().__init__(message)


def _neighborhood(triples, uri):
    """Triples touching a resource, plus rdf:type of every neighbor."""
    from .rdf import RDF_TYPE
    core = {t for t in triples
            if t.s == uri or (not t.literal and t.o == uri)}
    if not core:
        return frozenset()
    neighbors = set()
    for t in core:
        neighbors.add(t.s)
        if not t.literal:
            neighbors.add(t.o)
    neighbors.discard(uri)
    types = {t for t in triples if t.p == RDF_TYPE and t.s in neighbors}
    return frozenset(core | types)


def _gaps_json(state, vocab):
    report = find_gaps(state.store, vocab)
    return {"concepts_without_examples": list(report.concepts_without_examples),
            "unjustified_steps": list(report.unjustified_steps)}


def _theory_param(value, repo):
    if value.startswith("http://") or value.startswith("https://"):
        return value
    return theory_uri(repo.config.base_uri, value)


class LecturesServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, repo, host="127.0.0.1", port=0, static_dir=None):
        self.repo = repo
        self.static_dir = static_dir or os.path.join(repo.root, "static")
        super().__init__((host, port), _Handler)

    @property
    def base_url(self):
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


def serve(repo, host, port, static_dir=None):
    """Blocking server loop (the CLI entry)."""
    server = LecturesServer(repo, host, port, static_dir)
    try:
        server.serve_forever()
    finally:
        server.server_close()


def start_background(repo, host="127.0.0.1", port=0, static_dir=None):
    """Server on a daemon thread; returns (server, thread) for tests/demos."""
    server = LecturesServer(repo, host, port, static_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread
