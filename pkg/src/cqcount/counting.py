"""The structural counting pipeline and the trichotomy classifier.

Counting proceeds in three steps: take the core of the query, fold every
S-component into a single projection relation over the free variables it
touches (this quantifier-eliminated instance has the same answer set, and
its hypergraph's primal graph is exactly the contract of the core's
S-hypergraph), then run a counting dynamic program over a nice tree
decomposition of that graph.

The classifier measures where a single query lands relative to
user-supplied width bounds. The bounds-based label is advisory: the
underlying theory classifies query classes, not individual queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Tuple

from .cores import core_of_query
from .errors import InputError, ResourceBudgetError
from .homomorphisms import (
    HomSearchConfig,
    _HomSearch,
    check_vocabulary,
    count_answers_brute,
)
from .hypergraphs import (
    DEFAULT_STAR_SIZE_CAP,
    SComponent,
    SHypergraph,
    contract,
    hypergraph_of,
    primal_graph,
    s_components,
    star_sizes,
)
from .structures import (
    ConjunctiveQuery,
    RelationalStructure,
    Vocabulary,
    induced_substructure,
)
from .treewidth import (
    DEFAULT_EXACT_THRESHOLD,
    EXACT,
    TreeDecomposition,
    decompose,
    nice_tree,
    verify_decomposition,
)

MODE_AUTO = "auto"
MODE_BRUTE = "brute"
MODE_STRUCTURAL = "structural"

CASE_I = "I_tractable"
CASE_II = "II_clique_equivalent"
CASE_III = "III_sharp_clique_hard"

COMPONENT_PREFIX = "__comp_"


@dataclass(frozen=True)
class CountingConfig:
    """Caps and mode selection for count_answers."""

    mode: str = MODE_AUTO
    brute_cap: int = 10_000_000
    width_cap: int = 8
    exact_tw_threshold: int = DEFAULT_EXACT_THRESHOLD
    star_size_cap: int = DEFAULT_STAR_SIZE_CAP
    hom: HomSearchConfig = field(default_factory=HomSearchConfig)

    def __post_init__(self) -> None:
        if self.mode not in (MODE_AUTO, MODE_BRUTE, MODE_STRUCTURAL):
            raise InputError(f"unknown counting mode {self.mode!r}")
        if self.brute_cap <= 0 or self.width_cap <= 0:
            raise InputError("caps must be positive")


DEFAULT_COUNTING_CONFIG = CountingConfig()


def component_projection(q: ConjunctiveQuery, dst: RelationalStructure,
                         comp: SComponent,
                         cfg: CountingConfig = DEFAULT_COUNTING_CONFIG) -> Tuple[Tuple[str, ...], frozenset]:
    """The relation a component contributes to the contracted instance.

    Returns the sorted free variables the component touches and the set of
    their value tuples that extend to a homomorphism of the component's
    induced subquery. The component core is included in the induced set so
    that an isolated quantified variable still demands a target value.
    """
    scope = tuple(sorted(comp.closure & frozenset(q.free_vars)))
    if len(scope) > cfg.star_size_cap:
        raise ResourceBudgetError(
            f"component touches {len(scope)} free variables, cap is {cfg.star_size_cap}"
        )
    total = len(dst.domain) ** len(scope)
    if total > cfg.hom.enumeration_cap:
        raise ResourceBudgetError(
            f"component projection needs {total} assignments, cap is "
            f"{cfg.hom.enumeration_cap}"
        )
    sub = induced_substructure(q.structure, comp.closure | comp.component_core)
    search = _HomSearch(sub, dst, cfg.hom)
    values = sorted(dst.domain)
    rows = set()
    for combo in product(values, repeat=len(scope)):
        pins = dict(zip(scope, combo))
        if next(search.solutions(pins), None) is not None:
            rows.add(combo)
    return scope, frozenset(rows)


def contract_instance(q: ConjunctiveQuery, dst: RelationalStructure,
                      cfg: CountingConfig = DEFAULT_COUNTING_CONFIG) -> Tuple[ConjunctiveQuery, RelationalStructure]:
    """Quantifier-eliminate the instance, one fresh atom per S-component.

    The new query keeps every original atom whose variables are all free and
    gains, per component, one atom over the free variables in its closure;
    the new target interprets that atom as the component's projection. The
    answer sets of (q, dst) and of the result coincide exactly. Callers
    normally pass a core query, but the equivalence holds for any query.
    """
    check_vocabulary(q.structure, dst)
    free = frozenset(q.free_vars)
    h = hypergraph_of(q)
    comps = s_components(h)
    left_symbols = dict(q.structure.vocabulary.symbols)
    left_rels: Dict[str, frozenset] = {}
    for name, ts in q.structure.relations.items():
        left_rels[name] = frozenset(t for t in ts if set(t) <= free)
    right_rels: Dict[str, frozenset] = {name: dst.tuples(name) for name in left_symbols}
    max_arity = max(left_symbols.values(), default=0)
    for i, comp in enumerate(comps):
        scope, rows = component_projection(q, dst, comp, cfg)
        name = f"{COMPONENT_PREFIX}{i}"
        left_symbols[name] = len(scope)
        left_rels[name] = frozenset({scope})
        right_rels[name] = rows
        max_arity = max(max_arity, len(scope))
    cap = max(q.structure.vocabulary.arity_cap, max_arity)
    vocab = Vocabulary(left_symbols, arity_cap=cap)
    left = RelationalStructure(vocab, q.free_vars, left_rels)
    right = RelationalStructure(vocab, dst.domain, right_rels)
    return ConjunctiveQuery(left, q.free_vars), right


def count_quantifier_free_td(q: ConjunctiveQuery, dst: RelationalStructure,
                             td: TreeDecomposition,
                             cfg: CountingConfig = DEFAULT_COUNTING_CONFIG) -> int:
    """Count full homomorphisms of a quantifier-free query by bag DP.

    The decomposition (of the query's primal graph) is verified first. Each
    atom is assigned to exactly one nice-tree node whose bag covers its
    variables and filters the table there exactly once: leaves start at
    {() -> 1}, introduce nodes extend by every target value, forget nodes
    sum, join nodes multiply matching rows. Variables in no atom are still
    bag vertices, so each contributes a factor |target domain|.
    """
    if set(q.free_vars) != set(q.structure.domain):
        raise InputError("count_quantifier_free_td expects a quantifier-free query")
    check_vocabulary(q.structure, dst)
    g = primal_graph(hypergraph_of(q))
    verify_decomposition(g, td)
    nodes, root = nice_tree(td)
    atoms = q.structure.atoms()
    assigned: Dict[int, list] = {}
    for name, t in atoms:
        scope = set(t)
        for i, node in enumerate(nodes):
            if scope <= node.bag:
                assigned.setdefault(i, []).append((name, t))
                break
        else:
            raise InputError(f"atom {name}{t!r} is not covered by any bag")
    values = sorted(dst.domain)
    rel = {name: dst.tuples(name) for name in q.structure.vocabulary.symbols}
    tables: List[Dict[tuple, int]] = [dict() for _ in nodes]
    for i, node in enumerate(nodes):
        bag = sorted(node.bag)
        if node.kind == "leaf":
            table = {(): 1}
        elif node.kind == "introduce":
            child = tables[node.children[0]]
            at = bag.index(node.var)
            table = {}
            for key, cnt in child.items():
                head, tail = key[:at], key[at:]
                for b in values:
                    table[head + (b,) + tail] = cnt
        elif node.kind == "forget":
            child_node = nodes[node.children[0]]
            child_bag = sorted(child_node.bag)
            at = child_bag.index(node.var)
            table = {}
            for key, cnt in tables[node.children[0]].items():
                short = key[:at] + key[at + 1:]
                table[short] = table.get(short, 0) + cnt
        elif node.kind == "join":
            left = tables[node.children[0]]
            right = tables[node.children[1]]
            if len(right) < len(left):
                left, right = right, left
            table = {}
            for key, cnt in left.items():
                other = right.get(key)
                if other:
                    table[key] = cnt * other
        else:
            raise InputError(f"unknown nice node kind {node.kind!r}")
        for name, t in assigned.get(i, ()):
            want = rel[name]
            if not t:
                if () not in want:
                    table = {}
                continue
            pos = {v: bag.index(v) for v in set(t)}
            table = {
                key: cnt
                for key, cnt in table.items()
                if tuple(key[pos[v]] for v in t) in want
            }
        tables[i] = table
        # Free the child tables early; instances can have many bags.
        for c in node.children:
            tables[c] = {}
    return tables[root].get((), 0)


def count_answers(q: ConjunctiveQuery, dst: RelationalStructure,
                  cfg: CountingConfig = DEFAULT_COUNTING_CONFIG) -> int:
    """Exact |hom(A, B, S)| via the configured strategy.

    brute enumerates assignments; structural runs core -> contract -> tree
    DP; auto prefers structural when the contracted width fits the cap and
    falls back to brute while it stays within its cap. All modes agree
    whenever they run to completion.
    """
    check_vocabulary(q.structure, dst)
    if cfg.mode == MODE_BRUTE:
        return count_answers_brute(q, dst, cfg.hom)
    core = core_of_query(q, cfg.hom)
    left, right = contract_instance(core, dst, cfg)
    td = decompose(primal_graph(hypergraph_of(left)), cfg.exact_tw_threshold)
    if td.width > cfg.width_cap:
        if cfg.mode == MODE_STRUCTURAL:
            raise ResourceBudgetError(
                f"contracted instance has width {td.width}, cap is {cfg.width_cap}"
            )
        if len(dst.domain) ** len(q.free_vars) <= cfg.brute_cap:
            return count_answers_brute(q, dst, cfg.hom)
        raise ResourceBudgetError(
            "instance exceeds both the width cap and the brute-force cap"
        )
    return count_quantifier_free_td(left, right, td, cfg)


@dataclass(frozen=True)
class TrichotomyReport:
    """Measured widths and star sizes plus the advisory case label."""

    core_query: ConjunctiveQuery
    core_treewidth: int
    core_treewidth_exact: bool
    contract_graph: SHypergraph
    contract_treewidth: int
    contract_treewidth_exact: bool
    quantified_star_size: int
    strict_star_size: int
    k_core: int
    k_contract: int
    case_label: str

    def to_json_dict(self) -> dict:
        from .parsing import render_query

        has_atoms = any(t for _, t in self.core_query.structure.atoms())
        return {
            "case_label": self.case_label,
            "core_query": render_query(self.core_query) if has_atoms else None,
            "k_core": self.k_core,
            "k_contract": self.k_contract,
            "core_treewidth": {
                "width": self.core_treewidth,
                "exact": self.core_treewidth_exact,
            },
            "contract_treewidth": {
                "width": self.contract_treewidth,
                "exact": self.contract_treewidth_exact,
            },
            "quantified_star_size": self.quantified_star_size,
            "strict_star_size": self.strict_star_size,
            "contract_graph": {
                "vertices": sorted(self.contract_graph.vertices),
                "edges": sorted(sorted(e) for e in self.contract_graph.edges),
            },
        }


def classify(q: ConjunctiveQuery, k_core: int = 3, k_contract: int = 3,
             cfg: CountingConfig = DEFAULT_COUNTING_CONFIG) -> TrichotomyReport:
    """Measure the query's core and contract widths and label the case.

    A width strictly below its bound counts as bounded: case I when both
    widths stay below, case III when the contract width reaches its bound,
    case II otherwise (core width reaches its bound, contract stays below).
    Labels are advisory when a width is only an upper bound.
    """
    core = core_of_query(q, cfg.hom)
    h = hypergraph_of(core)
    core_td = decompose(primal_graph(h), cfg.exact_tw_threshold)
    cg = contract(h)
    contract_td = decompose(primal_graph(cg), cfg.exact_tw_threshold)
    star, strict = star_sizes(h, cfg.star_size_cap)
    if contract_td.width >= k_contract:
        label = CASE_III
    elif core_td.width >= k_core:
        label = CASE_II
    else:
        label = CASE_I
    return TrichotomyReport(
        core_query=core,
        core_treewidth=core_td.width,
        core_treewidth_exact=core_td.exactness == EXACT,
        contract_graph=cg,
        contract_treewidth=contract_td.width,
        contract_treewidth_exact=contract_td.exactness == EXACT,
        quantified_star_size=star,
        strict_star_size=strict,
        k_core=k_core,
        k_contract=k_contract,
        case_label=label,
    )
