"""S-components, star sizes, and the contract hypergraph.

The quantified variables split into connected components; each component's
closure reaches into the free set S. Star size measures how independently
a component touches S; contracting replaces every component by a clique on
the free vertices it reaches.
"""

from cqcount import (
    contract,
    hypergraph_of,
    parse_query,
    primal_graph,
    s_components,
    star_sizes,
)
from cqcount.generators import quantified_star_query

star = quantified_star_query(4)
h = hypergraph_of(star)
print("4-leaf star query, centre quantified")
print("vertices:", h.vertices, " S =", sorted(h.s_set))
for comp in s_components(h):
    print("component core:", sorted(comp.component_core),
          "closure:", sorted(comp.closure))
print("(star size, strict star size):", star_sizes(h))

c = contract(h)
print()
print("contract: vertices", c.vertices)
print("contract primal edges:", sorted(sorted(e) for e in primal_graph(c).edges))

print()
q = parse_query("answer(s1,s2) :- E(s1,q1), E(q1,s2), F(r,r).")
h = hypergraph_of(q)
print("two components, one per quantified blob:")
for comp in s_components(h):
    print("  core:", sorted(comp.component_core), "closure:", sorted(comp.closure))
print("(star size, strict star size):", star_sizes(h))
print("contract primal edges:",
      sorted(sorted(e) for e in primal_graph(contract(h)).edges))
