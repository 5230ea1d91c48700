"""Start a lectures server over the golden corpus for frontend tests.

Creates a throwaway repository, commits the golden + gap corpora, serves on
an ephemeral port, and prints `READY <port>` once requests can be made.
"""

import os
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(HERE, "..", "..", "tests"))

from corpus import GAP_CORPUS, GOLDEN  # noqa: E402
from lectures.repo import Accepted, Repository  # noqa: E402
from lectures.server import LecturesServer  # noqa: E402


def main():
    root = tempfile.mkdtemp(prefix="jobad-golden-")
    repo = Repository.create(root)
    outcome = repo.commit({**GOLDEN, **GAP_CORPUS}, "frontend-tests", "golden")
    assert isinstance(outcome, Accepted), outcome
    static_dir = os.path.join(HERE, "..", "dist")
    server = LecturesServer(repo, "127.0.0.1", 0, static_dir=static_dir)
    print(f"READY {server.server_address[1]}", flush=True)
    server.serve_forever()


if __name__ == "__main__":
    main()
