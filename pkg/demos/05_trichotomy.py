"""Where a query lands in the tractability trichotomy.

Two widths decide everything: the treewidth of the query core and the
treewidth of its contract. Both small: counting is tractable. Core wide
but contract small: as hard as finding cliques. Contract wide: as hard as
counting cliques. For single queries the label is relative to the chosen
bounds (a width at or above its bound breaches it).
"""

import json

from cqcount import classify
from cqcount.generators import (
    boolean_clique_query,
    quantified_star_query,
    quantifier_free_path_query,
)

families = [
    ("quantifier-free path, 5 vars", quantifier_free_path_query(4)),
    ("Boolean 5-clique", boolean_clique_query(5)),
    ("quantified 5-leaf star", quantified_star_query(5)),
]
for name, query in families:
    report = classify(query, k_core=3, k_contract=3)
    print(f"{name:30s} core width {report.core_treewidth:2d}   "
          f"contract width {report.contract_treewidth:2d}   -> {report.case_label}")

print()
print("Full report for the star:")
print(json.dumps(classify(quantified_star_query(5)).to_json_dict(), indent=2,
                 sort_keys=True))
