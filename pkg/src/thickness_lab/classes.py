"""Graph-class recognizers and descriptors with declared closure metadata.

A ClassDescriptor names a class F, carries a total membership predicate,
and declares three closure flags: (a) closed under topological minors,
(b) closed under 1-sums, (c) contains a triangle.  The declared
density_coefficient D bounds |E(F)| <= D * |V(F)| over the whole class
(None means no finite bound exists).  Flags are metadata, sanity-checked
by sampling; they are never derived from the predicate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

import networkx as nx

from .generators import complete_bipartite, complete_graph
from .graph import Graph, GraphError, add_apex, connected_components, is_isomorphic


class SizeGuardExceeded(RuntimeError):
    """Exponential oracle refused an oversized input; pass force=True to override."""


class UnknownClassError(ValueError):
    def __init__(self, name: str, available: list[str]):
        super().__init__(f"unknown class {name!r}; available: {', '.join(available)}")
        self.name = name
        self.available = available


def is_forest(g: Graph) -> bool:
    parent = list(range(g.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def is_pseudoforest(g: Graph) -> bool:
    """Every connected component has at most as many edges as nodes."""
    comp_of = [0] * g.n
    comps = connected_components(g)
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    edge_count = [0] * len(comps)
    for u, _ in g.edges:
        edge_count[comp_of[u]] += 1
    return all(edge_count[i] <= len(comp) for i, comp in enumerate(comps))


def _blocks(g: Graph) -> list[list[tuple[int, int]]]:
    """Edge sets of the biconnected blocks (iterative Hopcroft-Tarjan)."""
    visited = [False] * g.n
    depth = [0] * g.n
    low = [0] * g.n
    parent_edge: list[Optional[tuple[int, int]]] = [None] * g.n
    stack_edges: list[tuple[int, int]] = []
    blocks: list[list[tuple[int, int]]] = []

    for root in range(g.n):
        if visited[root]:
            continue
        visited[root] = True
        work: list[tuple[int, Iterator[int]]] = [(root, iter(g.neighbors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                e = (min(v, w), max(v, w))
                if not visited[w]:
                    visited[w] = True
                    depth[w] = depth[v] + 1
                    low[w] = depth[w]
                    parent_edge[w] = e
                    stack_edges.append(e)
                    work.append((w, iter(g.neighbors(w))))
                    advanced = True
                    break
                if e != parent_edge[v] and depth[w] < depth[v]:
                    stack_edges.append(e)
                    if depth[w] < low[v]:
                        low[v] = depth[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= depth[u]:
                    block = []
                    while stack_edges:
                        e = stack_edges.pop()
                        block.append(e)
                        if e == parent_edge[v]:
                            break
                    if block:
                        blocks.append(block)
    return blocks


def is_cactus(g: Graph) -> bool:
    """True iff every biconnected block is an edge or a single cycle.

    A 2-connected block on >= 3 nodes is a cycle exactly when it has no
    more edges than nodes, so a count per block decides.
    """
    for block in _blocks(g):
        nodes = {v for e in block for v in e}
        if len(block) > len(nodes):
            return False
    return True


def is_eulerian_class(g: Graph) -> bool:
    """All degrees even; connectivity is NOT required."""
    return all(g.degree(v) % 2 == 0 for v in range(g.n))


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def is_planar(g: Graph) -> bool:
    if g.n >= 3 and g.m > 3 * g.n - 6:
        return False
    ok, _ = nx.check_planarity(_to_nx(g), counterexample=False)
    return ok


def is_outerplanar(g: Graph) -> bool:
    """A graph is outerplanar iff adding an apex node keeps it planar.

    Small graphs take a direct block-by-block route (each 2-connected block
    must carry a Hamiltonian cycle whose chords are pairwise non-crossing);
    it is exact and much faster than the apex test in the solver hot path,
    and the test suite cross-checks the two routes against each other and
    against the forbidden-minor oracle.
    """
    if g.n >= 2 and g.m > 2 * g.n - 3:
        return False
    if g.n <= 14:
        return _outerplanar_small(g)
    return is_planar(add_apex(g))


def is_outerplanar_apex(g: Graph) -> bool:
    """The apex-augmentation route, kept as an independently testable path."""
    if g.n >= 2 and g.m > 2 * g.n - 3:
        return False
    return is_planar(add_apex(g))


def _outerplanar_small(g: Graph) -> bool:
    for block in _blocks(g):
        if len(block) < 3:
            continue
        if not _outerplanar_block(block):
            return False
    return True


def _outerplanar_block(block: list[tuple[int, int]]) -> bool:
    """2-connected block: outerplanar iff some Hamiltonian cycle has pairwise
    non-crossing chords (and then that cycle is the unique outer boundary)."""
    nodes = sorted({v for e in block for v in e})
    b = len(nodes)
    if len(block) > 2 * b - 3:
        return False
    idx = {v: i for i, v in enumerate(nodes)}
    adj = [0] * b
    edges = []
    for u, v in block:
        iu, iv = idx[u], idx[v]
        adj[iu] |= 1 << iv
        adj[iv] |= 1 << iu
        edges.append((min(iu, iv), max(iu, iv)))

    pos = [0] * b
    path = [0]
    on_path = 1

    def chords_non_crossing() -> bool:
        chords = []
        for u, v in edges:
            pu, pv = pos[u], pos[v]
            if pu > pv:
                pu, pv = pv, pu
            if pv - pu != 1 and not (pu == 0 and pv == b - 1):
                chords.append((pu, pv))
        for i, (a, c) in enumerate(chords):
            for e, f in chords[i + 1 :]:
                inside_e = a < e < c
                inside_f = a < f < c
                if inside_e != inside_f and e != a and e != c and f != a and f != c:
                    return False
        return True

    def extend() -> bool:
        nonlocal on_path
        v = path[-1]
        if len(path) == b:
            if adj[v] & 1:  # closes back to node 0
                for p, node in enumerate(path):
                    pos[node] = p
                if chords_non_crossing():
                    return True
            return False
        cand = adj[v] & ~on_path
        while cand:
            bit = cand & -cand
            w = bit.bit_length() - 1
            cand ^= bit
            path.append(w)
            on_path |= bit
            if extend():
                return True
            path.pop()
            on_path ^= bit
        return False

    return extend()


_K4 = complete_graph(4)
_K23 = complete_bipartite(2, 3)


def _adj_masks(g: Graph) -> tuple[int, ...]:
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return tuple(adj)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _prune_low_degree(adj: tuple[int, ...]) -> tuple[int, ...]:
    """Drop nodes of degree <= 1; safe because both targets have min degree 2."""
    while True:
        keep = [i for i, a in enumerate(adj) if bin(a).count("1") >= 2]
        if len(keep) == len(adj):
            return adj
        pos = {old: new for new, old in enumerate(keep)}
        adj = tuple(
            sum(1 << pos[w] for w in _bits(adj[old]) if w in pos) for old in keep
        )


def _has_k4_subgraph(adj: tuple[int, ...]) -> bool:
    n = len(adj)
    for u in range(n):
        for v in _bits(adj[u] >> (u + 1)):
            v += u + 1
            common = _bits(adj[u] & adj[v])
            for i, x in enumerate(common):
                for y in common[i + 1 :]:
                    if adj[x] >> y & 1:
                        return True
    return False


def _has_k23_subgraph(adj: tuple[int, ...]) -> bool:
    n = len(adj)
    for u in range(n):
        for v in range(u + 1, n):
            if bin(adj[u] & adj[v]).count("1") >= 3:
                return True
    return False


def _contract(adj: tuple[int, ...], u: int, v: int) -> tuple[int, ...]:
    """Contract edge {u, v} into u, drop index v, compact higher indices."""
    merged = (adj[u] | adj[v]) & ~((1 << u) | (1 << v))
    low_mask = (1 << v) - 1
    rows = []
    for w in range(len(adj)):
        if w == v:
            continue
        if w == u:
            row = merged
        else:
            row = adj[w]
            if row >> v & 1:
                row = (row & ~(1 << v)) | (1 << u)
        rows.append((row & low_mask) | ((row >> (v + 1)) << v))
    return tuple(rows)


def has_minor(g: Graph, h: Graph, *, force: bool = False) -> bool:
    """Exact minor test for h in {K4, K2,3} by branching over edge contractions.

    Deletions never help for these targets once degree-<=1 nodes are pruned
    away, so the search contracts one edge at a time and tests for a plain
    subgraph copy at every step.  Exponential; refuses graphs with more than
    12 nodes unless forced.
    """
    if is_isomorphic(h, _K4):
        subgraph_check, min_nodes = _has_k4_subgraph, 4
    elif is_isomorphic(h, _K23):
        subgraph_check, min_nodes = _has_k23_subgraph, 5
    else:
        raise GraphError("minor oracle supports only K4 and K2,3 targets")
    if g.n > 12 and not force:
        raise SizeGuardExceeded(f"minor search on {g.n} nodes; pass force=True to run anyway")

    memo: dict[tuple[int, ...], bool] = {}

    def search(adj: tuple[int, ...]) -> bool:
        adj = _prune_low_degree(adj)
        n = len(adj)
        m = sum(bin(a).count("1") for a in adj) // 2
        if n < min_nodes or m < 6:
            return False
        cached = memo.get(adj)
        if cached is not None:
            return cached
        if subgraph_check(adj):
            memo[adj] = True
            return True
        for u in range(n):
            for v in _bits(adj[u] >> (u + 1)):
                if search(_contract(adj, u, v + u + 1)):
                    memo[adj] = True
                    return True
        memo[adj] = False
        return False

    return search(_adj_masks(g))


def is_partial_two_tree(g: Graph) -> bool:
    """Treewidth <= 2 (equivalently no K4 minor), by degree-<=2 elimination."""
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    alive = set(range(g.n))
    while alive:
        v = min((w for w in alive if len(adj[w]) <= 2), default=-1)
        if v < 0:
            return False
        nbrs = sorted(adj[v])
        if len(nbrs) == 2:
            x, y = nbrs
            adj[x].add(y)
            adj[y].add(x)
        for w in nbrs:
            adj[w].discard(v)
        adj[v].clear()
        alive.remove(v)
    return True


@dataclass(frozen=True)
class ClassDescriptor:
    name: str
    member: Callable[[Graph], bool] = field(compare=False)
    monotone: bool = True
    closed_topo_minors: bool = True
    closed_one_sums: bool = True
    contains_c3: bool = True
    density_coefficient: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.closed_topo_minors and not self.monotone:
            raise ValueError(f"{self.name}: closure under topological minors implies monotone")


_BUILTINS: dict[str, ClassDescriptor] = {}


def _register(name, member, monotone, a, b, c, density):
    _BUILTINS[name] = ClassDescriptor(
        name=name,
        member=member,
        monotone=monotone,
        closed_topo_minors=a,
        closed_one_sums=b,
        contains_c3=c,
        density_coefficient=density,
    )


_register("forest", is_forest, True, True, True, False, Fraction(1))
_register("pseudoforest", is_pseudoforest, True, True, False, True, Fraction(1))
_register("eulerian", is_eulerian_class, False, False, True, True, None)
_register("cactus", is_cactus, True, True, True, True, Fraction(3, 2))
_register("outerplanar", is_outerplanar, True, True, True, True, Fraction(2))
_register("planar", is_planar, True, True, True, True, Fraction(3))
_register("partial-2-tree", is_partial_two_tree, True, True, True, True, Fraction(2))


def max_member_edges(f: ClassDescriptor, n: int) -> Optional[int]:
    """Largest edge count of any member on n nodes; a safe pruning cap.

    Tight values for the builtin classes, density-coefficient fallback
    otherwise, None when the class has no finite density bound.
    """
    if n <= 1:
        return 0
    tight = {
        "forest": n - 1,
        "pseudoforest": n,
        "cactus": 3 * (n - 1) // 2,
        "outerplanar": 2 * n - 3,
        "partial-2-tree": 2 * n - 3,
        "planar": n * (n - 1) // 2 if n <= 2 else 3 * n - 6,
    }
    if f.name in tight:
        return tight[f.name]
    if f.density_coefficient is None:
        return None
    return int(f.density_coefficient * n)


def builtin_class_names() -> list[str]:
    return list(_BUILTINS)


def builtin_descriptor(name: str) -> ClassDescriptor:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise UnknownClassError(name, builtin_class_names()) from None
