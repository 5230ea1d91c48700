"""One formula, two notations: the binomial stack and the French C-form.

Run:  python3 demos/02_notation_variants.py
"""

from lectures import (Apply, Sym, Var, context_for, linearize, parse_math,
                      parse_module, render_object, resolve)
from lectures.stex import scope_for

SOURCE = r"""
\begin{module}[id=combinat]
  \symdef{binom}[prec=900]{(#1 \atop #2)}
  \symvariant{binom}{fr}{\mathcal{C}^{#2}_{#1}}
\end{module}
"""

collection = resolve([parse_module(SOURCE)], "http://ex.org")
binom_nk = Apply(Sym("combinat", "binom"), (Var("n"), Var("k")))

for variant in (None, "fr"):
    ctx = context_for(collection, variant=variant)
    rendered = render_object(binom_nk, ctx)
    print(f"--- variant={variant!r} ---")
    print("MathML: ", rendered.to_string())
    print("ASCII:  ", linearize(binom_nk, ctx))
    print()

# the linearized text reads back to the same object, whichever notation
scope = scope_for(collection, "combinat")
for text in [r"(n \atop k)", r"\mathcal{C}^{k}_{n}", r"\binom{n}{k}"]:
    assert parse_math(text, scope) == binom_nk
    print(f"parse_math({text!r}) == binom(n, k)")
