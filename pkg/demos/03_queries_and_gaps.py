"""The lecture-planning queries: prerequisite-aware examples, didactic gaps.

Run:  python3 demos/03_queries_and_gaps.py
"""

from lectures import (Store, examples_for, extract, find_gaps, parse_module,
                      resolve, select, theory_uri)
from lectures.query import parse_patterns

BASE = "http://ex.org"

CORPUS = {
    "graphs": r"""
\begin{module}[id=graphs]
  \symdef{tree}{\mathcal{T}}
  \begin{definition}[id=tree-def, for=tree]
    A tree $\tree$ is a connected acyclic graph.
  \end{definition}
\end{module}""",
    "formal-languages": r"""
\begin{module}[id=formal-languages]
  \importmodule{graphs}
  \begin{example}[id=parse-tree-ex, for=tree]
    The parse tree $\tree$ of a context-free derivation.
  \end{example}
\end{module}""",
    "operating-systems": r"""
\begin{module}[id=operating-systems]
  \importmodule{graphs}
  \begin{example}[id=dir-tree-ex, for=tree]
    A directory hierarchy $\tree$.
  \end{example}
\end{module}""",
}

collection = resolve([parse_module(t) for t in CORPUS.values()], BASE)
store = Store().load(extract(collection))

# "find examples for all concepts from graph theory, assuming as
# prerequisites the concepts from formal languages"
pairs = examples_for(store, theory_uri(BASE, "graphs"),
                     [theory_uri(BASE, "formal-languages")])
print("examples for graphs, prereq formal-languages:")
for concept, example in pairs:
    print(f"  {concept}  <-  {example}")
print("(the operating-systems example is excluded: not a prerequisite)\n")

# the same shape as a raw graph pattern
rows = select(store, parse_patterns([
    {"s": "?e", "p": "rdf:type", "o": "o:Example"},
    {"s": "?e", "p": "o:exemplifies", "o": "?c"},
], store.namespaces))
print("all example/concept bindings:")
for row in rows:
    print(f"  {row['?e']} exemplifies {row['?c']}")

print("\ndidactic gaps:", find_gaps(store))
