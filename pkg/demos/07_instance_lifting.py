"""Lifting a contract instance back onto the original hypergraph.

Given an instance whose query hypergraph equals contract(H, S), the lift
builds an instance over (H, S) itself with identical answers: each edge of
H becomes a single-tuple relation, and the quantified vertices of every
component share one value encoding an admissible assignment of its free
neighbourhood.
"""

import random
from itertools import product

from cqcount import (
    ConjunctiveQuery,
    RelationalStructure,
    Vocabulary,
    contract,
    enumerate_answers,
    hypergraph_of,
    lift_to_hypergraph,
)
from cqcount.generators import quantified_star_query

rng = random.Random(2)
target = hypergraph_of(quantified_star_query(3))
ct = contract(target)
print("target: 3-leaf star; contract primal is a triangle on the leaves")

# a generic instance over the contract: one relation per contract edge
elems = ("0", "1", "2")
symbols, lrels, rrels = {}, {}, {}
for i, e in enumerate(sorted(ct.edges, key=lambda e: sorted(e))):
    scope = tuple(sorted(e))
    symbols[f"Q{i}"] = len(scope)
    lrels[f"Q{i}"] = {scope}
    rrels[f"Q{i}"] = {t for t in product(elems, repeat=len(scope))
                      if rng.random() < 0.7}
vocab = Vocabulary(symbols)
left = ConjunctiveQuery(
    RelationalStructure(vocab, tuple(ct.vertices), lrels), tuple(ct.vertices))
right = RelationalStructure(vocab, elems, rrels)

lifted_q, lifted_b = lift_to_hypergraph(left, right, target)
print("lifted query variables:", lifted_q.structure.domain,
      "free:", lifted_q.free_vars)
print("lifted target domain size:", len(lifted_b.domain),
      f"({len(elems)} values + component encodings)")

before = set(enumerate_answers(left, right))
after = set(enumerate_answers(lifted_q, lifted_b))
print(f"answers before: {len(before)}, after: {len(after)}, equal: {before == after}")
assert before == after
