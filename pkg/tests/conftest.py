import json
import urllib.error
import urllib.request

import pytest

from corpus import BASE, GOLDEN
from lectures.repo import Repository, build
from lectures.rdf import DEFAULT_VOCAB
from lectures.server import start_background
from lectures.stex import parse_module, resolve


@pytest.fixture(scope="session")
def golden_collection():
    modules = [parse_module(text) for text in GOLDEN.values()]
    return resolve(modules, BASE)


@pytest.fixture(scope="session")
def golden_build():
    result = build(GOLDEN, BASE, DEFAULT_VOCAB)
    assert result.ok, result.errors
    return result


@pytest.fixture()
def repo(tmp_path):
    return Repository.create(str(tmp_path / "repo"))


@pytest.fixture(scope="session")
def golden_server(tmp_path_factory):
    root = tmp_path_factory.mktemp("golden-repo")
    repo = Repository.create(str(root))
    outcome = repo.commit(GOLDEN, "tests", "golden corpus")
    assert outcome.__class__.__name__ == "Accepted", outcome
    server, _thread = start_background(repo)
    yield server
    server.shutdown()


class Client:
    """Tiny urllib wrapper for server assertions."""

    def __init__(self, base_url):
        self.base_url = base_url

    def get(self, path, accept=None):
        headers = {"Accept": accept} if accept else {}
        req = urllib.request.Request(self.base_url + path, headers=headers)
        try:
            with urllib.request.urlopen(req) as resp:
                return resp.status, resp.headers.get("Content-Type"), resp.read().decode()
        except urllib.error.HTTPError as e:
            return e.code, e.headers.get("Content-Type"), e.read().decode()

    def post_json(self, path, payload):
        data = json.dumps(payload).encode()
        req = urllib.request.Request(self.base_url + path, data=data,
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req) as resp:
                return resp.status, json.loads(resp.read().decode())
        except urllib.error.HTTPError as e:
            return e.code, json.loads(e.read().decode())


@pytest.fixture(scope="session")
def client(golden_server):
    return Client(golden_server.base_url)
