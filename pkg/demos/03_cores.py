"""Cores of structures and of queries.

A structure is a core when it has no homomorphism into a proper part of
itself. Query cores pin the free variables first, so only the quantified
part can fold; equivalent queries (same core) have identical answer sets
on every database.
"""

from cqcount import (
    RelationalStructure,
    Vocabulary,
    core_of_query,
    core_of_structure,
    count_answers_brute,
    is_core,
    parse_query,
    render_query,
    structure_from_dict,
)

undirected_p3 = RelationalStructure(
    Vocabulary({"E": 2}),
    ("a", "b", "c"),
    {"E": {("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")}},
)
print("undirected path a-b-c is a core?", is_core(undirected_p3))
core = core_of_structure(undirected_p3)
print("its core has domain", core.domain, "and", len(core.tuples("E")), "arcs")

print()
print("The same fold is blocked once an endpoint is free:")
q = parse_query("answer(x) :- E(x,y), E(y,x), E(y,z), E(z,y).")
print("query      :", render_query(q))
print("query core :", render_query(core_of_query(q)))

print()
print("Redundant atoms vanish in the core and never change counts:")
lean = parse_query("answer(u) :- E(u,v).")
redundant = parse_query("answer(u) :- E(u,v), E(u,w), E(u,t).")
print("core of the redundant query:", render_query(core_of_query(redundant)))
db = structure_from_dict(
    {"relations": {"E": {"arity": 2, "tuples": [["1", "2"], ["2", "3"]]}}}
)
print("counts:", count_answers_brute(lean, db), "==",
      count_answers_brute(redundant, db))
