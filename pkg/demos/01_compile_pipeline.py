"""Walk the compiler pipeline by hand: source -> model -> XML -> page.

Run:  python3 demos/01_compile_pipeline.py
"""

from lectures import (context_for, extract, parse_module, render_document,
                      resolve, serialize_turtle, to_xml, validate)

SOURCE = r"""
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

# 1. parse the semantic-LaTeX surface into a module AST
module = parse_module(SOURCE)
print(f"parsed module {module.id!r} with {len(module.body)} body items")

# 2. resolve imports and references into a theory collection
collection = resolve([module], "http://ex.org")
theory = collection.theories["sets"]
print("statements:", [(s.id, s.kind) for s in theory.statements])

# 3. the collection validates (the commit gate runs exactly this)
print("violations:", validate(collection))

# 4. canonical XML interchange form
print("\n--- OMDoc XML ---")
print(to_xml(collection))

# 5. RDF structural outline (what the Linked Data endpoints serve)
print("--- Turtle ---")
print(serialize_turtle(extract(collection)))

# 6. the human-facing page: XHTML + MathML parallel markup + RDFa
page = render_document(theory, collection, context_for(collection),
                       "http://ex.org/ontology#")
print("--- XHTML (first lines) ---")
print("\n".join(page.splitlines()[:14]))
