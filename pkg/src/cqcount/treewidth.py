"""Tree decompositions: exact widths on small graphs, min-fill otherwise.

Both paths produce an elimination order and build the decomposition from
it: eliminating a vertex bags it with its current neighbourhood, which is
then cliqued. The exact path minimises the worst elimination degree by
dynamic programming over vertex subsets (bitmask encoded); the heuristic
picks the vertex needing the fewest fill edges. Decompositions carry an
exactness flag so callers never mistake an upper bound for the truth.

The convention ``width = max bag size - 1`` makes the empty graph width -1
(one empty bag).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .errors import InputError
from .hypergraphs import Graph, SHypergraph, primal_graph

EXACT = "exact"
UPPER_BOUND = "upper_bound"

# 2^16 DP entries is the largest table we are willing to fill exactly.
DEFAULT_EXACT_THRESHOLD = 16

GraphLike = Union[Graph, SHypergraph]


class DecompositionError(InputError):
    """A tree decomposition failed verification."""


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags, tree edges over bag indices, width, and an exactness flag."""

    bags: Tuple[frozenset, ...]
    tree_edges: frozenset
    width: int
    exactness: str


def _as_graph(obj: GraphLike) -> Graph:
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, SHypergraph):
        return primal_graph(obj)
    raise InputError(f"expected a Graph or SHypergraph, got {type(obj).__name__}")


def _exact_elimination(g: Graph, limit: int) -> Tuple[List[str], int]:
    """An elimination order whose worst degree equals the treewidth.

    f(S) = best-possible worst degree over orders eliminating exactly S
    first; the transition removes the vertex eliminated last. Its degree at
    that point counts the vertices outside S reachable from it through S.
    Reachability uses a precomputed neighbourhood-union table indexed by
    vertex masks, so each fixpoint step is a couple of integer operations.
    """
    vs = list(g.vertices)
    n = len(vs)
    if n > limit:
        raise InputError(f"exact treewidth handles at most {limit} vertices, got {n}")
    if n == 0:
        return [], -1
    index = {v: i for i, v in enumerate(vs)}
    adj = [0] * n
    for e in g.edges:
        i, j = sorted(index[v] for v in e)
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    size = 1 << n
    nu = [0] * size
    for m in range(1, size):
        low = m & -m
        nu[m] = nu[m ^ low] | adj[low.bit_length() - 1]
    infinity = n + 1
    f = [0] * size
    f[0] = -1
    choice = [-1] * size
    for m in range(1, size):
        best = infinity
        best_v = -1
        mm = m
        while mm:
            low = mm & -mm
            mm ^= low
            prev = m ^ low
            # Close v's reach under the already-eliminated set prev.
            r = low
            while True:
                grown = r | (nu[r] & prev)
                if grown == r:
                    break
                r = grown
            degree = (nu[r] & ~m).bit_count()
            prior = f[prev]
            cand = prior if prior > degree else degree
            if cand < best:
                best = cand
                best_v = low.bit_length() - 1
        f[m] = best
        choice[m] = best_v
    order_last_first = []
    m = size - 1
    while m:
        v = choice[m]
        order_last_first.append(vs[v])
        m ^= 1 << v
    return order_last_first[::-1], f[size - 1]


def exact_treewidth(obj: GraphLike, limit: int = DEFAULT_EXACT_THRESHOLD) -> int:
    """The exact treewidth, by subset dynamic programming."""
    return _exact_elimination(_as_graph(obj), limit)[1]


def _min_fill_elimination(g: Graph) -> List[str]:
    """Minimum-fill-in elimination order (tie break: vertex name)."""
    adjacency = g.adjacency()
    order = []
    while adjacency:
        def fill(v):
            nb = sorted(adjacency[v])
            return sum(
                1
                for i, u in enumerate(nb)
                for w in nb[i + 1:]
                if w not in adjacency[u]
            )
        v = min(sorted(adjacency), key=fill)
        order.append(v)
        nb = adjacency.pop(v)
        for u in nb:
            adjacency[u].discard(v)
            adjacency[u].update(nb - {u})
    return order


def decomposition_from_order(g: Graph, order: List[str], exactness: str) -> TreeDecomposition:
    """Bags from an elimination order, linked into a tree.

    Bag i holds order[i] plus its neighbourhood at elimination time and
    attaches to the bag of the earliest-eliminated such neighbour (the
    neighbourhood is cliqued, so it survives intact into that bag). A bag
    without later neighbours chains to the next one, which keeps
    disconnected graphs in a single tree.
    """
    if set(order) != set(g.vertices) or len(order) != len(g.vertices):
        raise InputError("elimination order must list every vertex exactly once")
    n = len(order)
    if n == 0:
        return TreeDecomposition((frozenset(),), frozenset(), -1, exactness)
    pos = {v: i for i, v in enumerate(order)}
    adjacency = g.adjacency()
    bags = []
    for v in order:
        nb = adjacency.pop(v)
        bags.append(frozenset(nb | {v}))
        for u in nb:
            adjacency[u].discard(v)
            adjacency[u].update(nb - {u})
    edges = set()
    for i, v in enumerate(order):
        rest = bags[i] - {v}
        if rest:
            j = min(pos[u] for u in rest)
            edges.add((i, j) if i < j else (j, i))
        elif i + 1 < n:
            edges.add((i, i + 1))
    width = max(len(b) for b in bags) - 1
    return TreeDecomposition(tuple(bags), frozenset(edges), width, exactness)


def decompose(obj: GraphLike, exact_threshold: int = DEFAULT_EXACT_THRESHOLD) -> TreeDecomposition:
    """A valid tree decomposition: exact up to the threshold, min-fill above.

    Hypergraphs are decomposed via their primal graph. The result is always
    verified before being returned.
    """
    g = _as_graph(obj)
    if len(g.vertices) <= exact_threshold:
        order, _ = _exact_elimination(g, exact_threshold)
        td = decomposition_from_order(g, order, EXACT)
    else:
        td = decomposition_from_order(g, _min_fill_elimination(g), UPPER_BOUND)
    verify_decomposition(g, td)
    return td


def verify_decomposition(obj: GraphLike, td: TreeDecomposition) -> int:
    """Check the three decomposition axioms plus tree shape; return the width.

    Raises DecompositionError naming the first failure: vertex or edge
    uncovered, occurrence connectivity, malformed tree, width mismatch.
    """
    g = _as_graph(obj)
    bags = td.bags
    if not bags:
        raise DecompositionError("decomposition has no bags")
    k = len(bags)
    adj: Dict[int, set] = {i: set() for i in range(k)}
    for edge in td.tree_edges:
        i, j = edge
        if not (0 <= i < j < k):
            raise DecompositionError(f"bad tree edge {edge!r}")
        adj[i].add(j)
        adj[j].add(i)
    if len(td.tree_edges) != k - 1:
        raise DecompositionError("tree edge count is wrong for a tree")
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != k:
        raise DecompositionError("tree is not connected")
    vset = set(g.vertices)
    bagged = set().union(*bags)
    if not bagged <= vset:
        raise DecompositionError(f"bags mention unknown vertices {sorted(bagged - vset)!r}")
    missing = vset - bagged
    if missing:
        raise DecompositionError(f"vertex {sorted(missing)[0]!r} uncovered")
    for e in g.edges:
        if not any(e <= b for b in bags):
            raise DecompositionError(f"edge {sorted(e)!r} uncovered")
    for v in sorted(vset):
        occ = {i for i, b in enumerate(bags) if v in b}
        start = min(occ)
        reached = {start}
        stack = [start]
        while stack:
            for j in adj[stack.pop()]:
                if j in occ and j not in reached:
                    reached.add(j)
                    stack.append(j)
        if reached != occ:
            raise DecompositionError(f"occurrence bags of {v!r} violate connectivity")
    width = max(len(b) for b in bags) - 1
    if width != td.width:
        raise DecompositionError(f"stored width {td.width} but bags give {width}")
    return width


@dataclass(frozen=True)
class NiceNode:
    """One node of a nice tree: leaf / introduce / forget / join."""

    kind: str
    bag: frozenset
    var: Optional[str]
    children: Tuple[int, ...]


def nice_tree(td: TreeDecomposition) -> Tuple[List[NiceNode], int]:
    """Expand a decomposition into nice form, rooted with an empty bag.

    Nodes are returned children-before-parents, so a single forward pass
    evaluates any bottom-up dynamic program; the second value is the root
    index. Joins are binary; introduce/forget steps change one variable at
    a time.
    """
    bags = td.bags
    adj: Dict[int, List[int]] = {i: [] for i in range(len(bags))}
    for i, j in td.tree_edges:
        adj[i].append(j)
        adj[j].append(i)
    nodes: List[NiceNode] = []

    def emit(kind, bag, var, children) -> int:
        nodes.append(NiceNode(kind, frozenset(bag), var, tuple(children)))
        return len(nodes) - 1

    def lift(cur: int, cur_bag: frozenset, target: frozenset) -> int:
        bag = set(cur_bag)
        for v in sorted(cur_bag - target):
            bag.discard(v)
            cur = emit("forget", frozenset(bag), v, (cur,))
        for v in sorted(target - frozenset(bag)):
            bag.add(v)
            cur = emit("introduce", frozenset(bag), v, (cur,))
        return cur

    def build(b: int, parent: int) -> int:
        children = sorted(c for c in adj[b] if c != parent)
        if not children:
            cur = emit("leaf", frozenset(), None, ())
            return lift(cur, frozenset(), bags[b])
        lifted = [lift(build(c, b), bags[c], bags[b]) for c in children]
        cur = lifted[0]
        for nxt in lifted[1:]:
            cur = emit("join", bags[b], None, (cur, nxt))
        return cur

    root = build(0, -1)
    root = lift(root, bags[0], frozenset())
    return nodes, root
