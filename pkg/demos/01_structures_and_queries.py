"""Structures, queries, and the pinning operators.

A conjunctive query is kept as a pair: the natural model (a relational
structure over the query's variables) plus the ordered free variables.
"""

from cqcount import (
    augment,
    parse_query,
    render_query,
    star_structure,
    structure_to_dict,
)

q = parse_query("answer(x,y) :- E(x,y), E(y,z).")
print("query text   :", render_query(q))
print("free variables:", q.free_vars)
print("all variables :", q.structure.domain)
print("atoms         :", q.structure.atoms())

print()
print("Pinning the free variables (augment) adds one singleton unary")
print("relation per free variable; pinning everything (star) covers the")
print("quantified variables too:")
pinned = augment(q)
print("augment adds  :", sorted(n for n in pinned.vocabulary.symbols
                                if n not in q.structure.vocabulary.symbols))
starred = star_structure(q.structure)
print("star adds     :", sorted(n for n in starred.vocabulary.symbols
                                if n not in q.structure.vocabulary.symbols))

print()
print("Structures serialise to the same JSON shape the CLI loads:")
import json

print(json.dumps(structure_to_dict(q.structure), indent=2))
