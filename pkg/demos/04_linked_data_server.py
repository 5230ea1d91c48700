"""Commit to a versioned repository and browse it over HTTP.

Run:  python3 demos/04_linked_data_server.py
"""

import json
import tempfile
import urllib.request

from lectures import Repository
from lectures.server import start_background

SETS = r"""
\begin{module}[id=sets]
  \symdef{union}[prec=500]{#*[\cup]}
  \begin{definition}[id=union-def, for=union]
    The union $\union{A,B}$ holds every member of each operand.
  \end{definition}
  \begin{example}[id=union-ex, for=union]
    $\union{A,B,C}$ joins three sets.
  \end{example}
\end{module}
"""

BROKEN = r"""
\begin{module}[id=sets]
  \begin{example}[for=nosuch]dangling reference\end{example}
\end{module}
"""

repo = Repository.create(tempfile.mkdtemp(prefix="lectures-demo-"))
print("commit #1:", repo.commit({"sets.stex": SETS}, "demo", "initial"))
print("commit #2 (broken, rejected):",
      type(repo.commit({"sets.stex": BROKEN}, "demo", "oops")).__name__)
print("HEAD is still revision", repo.head, "\n")

server, _ = start_background(repo)
url = server.base_url


def get(path, accept):
    req = urllib.request.Request(url + path, headers={"Accept": accept})
    with urllib.request.urlopen(req) as resp:
        return resp.headers["Content-Type"], resp.read().decode()


for accept in ("application/omdoc+xml", "text/turtle", "application/xhtml+xml"):
    ctype, body = get("/omdoc/sets", accept)
    print(f"Accept: {accept:26} -> {ctype} ({len(body)} bytes)")

print("\nneighborhood of sets#union:")
ctype, body = get("/neighborhood?uri=http%3A%2F%2Fex.org%2Fomdoc%2Fsets%23union",
                  "application/json")
for t in json.loads(body)["triples"]:
    print("  ", t["s"], t["p"].rsplit("#", 1)[-1], t["o"])

server.shutdown()
