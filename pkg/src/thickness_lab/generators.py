"""Named small graphs, seeded random generators, and exhaustive enumeration.

Everything here is deterministic: random constructions take an explicit
``random.Random`` and the enumeration of non-isomorphic graphs is a pure
function of n.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import numpy as np

from .graph import Graph, GraphError


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs at least 3 nodes, got {n}")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i + 1) for i in range(leaves)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def prism_graph() -> Graph:
    """Triangular prism C3 x K2 (3-regular on 6 nodes)."""
    tris = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    rungs = [(0, 3), (1, 4), (2, 5)]
    return Graph(6, tuple(tris + rungs))


def bowtie_graph() -> Graph:
    """Two triangles sharing one node."""
    return Graph(5, ((0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)))


def k4_minus_edge() -> Graph:
    return Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)))


NAMED_GRAPHS = {
    "k4": lambda: complete_graph(4),
    "k5": lambda: complete_graph(5),
    "k33": lambda: complete_bipartite(3, 3),
    "k23": lambda: complete_bipartite(2, 3),
    "c3": lambda: cycle_graph(3),
    "c4": lambda: cycle_graph(4),
    "c5": lambda: cycle_graph(5),
    "petersen": petersen_graph,
    "prism": prism_graph,
    "bowtie": bowtie_graph,
    "k4-minus-edge": k4_minus_edge,
}


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, tuple(edges))


def random_graph_with_m(n: int, m: int, rng: random.Random) -> Graph:
    pairs = list(itertools.combinations(range(n), 2))
    if m > len(pairs):
        raise GraphError(f"cannot place {m} edges on {n} nodes")
    return Graph(n, tuple(rng.sample(pairs, m)))


def random_regular_graph(n: int, k: int, rng: random.Random, max_tries: int = 2000) -> Graph:
    """k-regular simple graph by the pairing model with rejection."""
    if n * k % 2 != 0 or k >= n or k < 0:
        raise GraphError(f"no {k}-regular simple graph on {n} nodes")
    stubs = [v for v in range(n) for _ in range(k)]
    for _ in range(max_tries):
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            key = (min(u, v), max(u, v))
            if key in edges:
                ok = False
                break
            edges.add(key)
        if ok:
            return Graph(n, tuple(sorted(edges)))
    raise GraphError(f"failed to sample a {k}-regular graph on {n} nodes")


def random_forest(n: int, rng: random.Random, keep: float = 0.7) -> Graph:
    """Random subforest of a uniform random labeled tree."""
    edges = []
    for v in range(1, n):
        if rng.random() < keep:
            edges.append((rng.randrange(v), v))
    return Graph(n, tuple(edges))


def random_cactus(n: int, rng: random.Random) -> Graph:
    """Grow a cactus by attaching pendant edges and node-disjoint cycles."""
    edges: list[tuple[int, int]] = []
    size = 1
    while size < n:
        anchor = rng.randrange(size)
        room = n - size
        if room >= 2 and rng.random() < 0.5:
            cyc = rng.randint(2, min(room, 4))  # cycle of length cyc+1 through anchor
            chain = [anchor] + [size + i for i in range(cyc)]
            for a, b in zip(chain, chain[1:]):
                edges.append((min(a, b), max(a, b)))
            edges.append((min(anchor, chain[-1]), max(anchor, chain[-1])))
            size += cyc
        else:
            edges.append((anchor, size))
            size += 1
    return Graph(n, tuple(edges))


def random_two_tree(n: int, rng: random.Random) -> Graph:
    """Random 2-tree: triangle plus repeated edge-attached nodes."""
    if n < 3:
        return path_graph(n)
    edges = [(0, 1), (0, 2), (1, 2)]
    for v in range(3, n):
        u, w = edges[rng.randrange(len(edges))]
        edges.append((u, v))
        edges.append((w, v))
    return Graph(n, tuple(edges))


def random_maximal_outerplanar(n: int, rng: random.Random) -> Graph:
    """Random triangulation of an n-gon (maximal outerplanar for n >= 3)."""
    if n < 3:
        return path_graph(n)
    edges = [(i, (i + 1) % n) for i in range(n)]

    def triangulate(arc: list[int]) -> None:
        if len(arc) < 3:
            return
        a, b = arc[0], arc[-1]
        pivot_idx = rng.randrange(1, len(arc) - 1)
        pivot = arc[pivot_idx]
        if pivot_idx > 1:
            edges.append((min(a, pivot), max(a, pivot)))
        if pivot_idx < len(arc) - 2:
            edges.append((min(pivot, b), max(pivot, b)))
        triangulate(arc[: pivot_idx + 1])
        triangulate(arc[pivot_idx:])

    triangulate(list(range(n)))
    return Graph(n, tuple(edges))


def random_eulerian(n: int, rng: random.Random, rounds: int = 4) -> Graph:
    """Symmetric difference of random cycles: every degree stays even."""
    if n < 3:
        return Graph(n)
    edges: set[tuple[int, int]] = set()
    for _ in range(rounds):
        size = rng.randint(3, max(3, n))
        if size > n:
            size = n
        nodes = rng.sample(range(n), size)
        for a, b in zip(nodes, nodes[1:] + nodes[:1]):
            key = (min(a, b), max(a, b))
            edges.symmetric_difference_update({key})
    return Graph(n, tuple(sorted(edges)))


def _edge_pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _min_forms(masks: np.ndarray, n: int) -> np.ndarray:
    """Minimum edge-bitmask over all node permutations, vectorized per permutation."""
    pairs = _edge_pairs(n)
    index = {p: i for i, p in enumerate(pairs)}
    best = masks.copy()
    for perm in itertools.permutations(range(n)):
        mapped = np.zeros_like(masks)
        for src, (u, v) in enumerate(pairs):
            pu, pv = perm[u], perm[v]
            dst = index[(pu, pv) if pu < pv else (pv, pu)]
            mapped |= ((masks >> src) & 1) << dst
        np.minimum(best, mapped, out=best)
    return best


@lru_cache(maxsize=None)
def _canonical_masks(n: int) -> tuple[int, ...]:
    """Edge bitmasks of all non-isomorphic graphs on exactly n nodes."""
    if n <= 1:
        return (0,)
    nbits = len(_edge_pairs(n))
    if n <= 6:
        masks = np.arange(1 << nbits, dtype=np.int64)
    else:
        # extend (n-1)-node representatives by one node with every neighborhood
        prev_pairs = _edge_pairs(n - 1)
        prev = _canonical_masks(n - 1)
        index = {p: i for i, p in enumerate(_edge_pairs(n))}
        cands = []
        for mask in prev:
            base = 0
            for src, p in enumerate(prev_pairs):
                if mask >> src & 1:
                    base |= 1 << index[p]
            for nb in range(1 << (n - 1)):
                extra = 0
                for v in range(n - 1):
                    if nb >> v & 1:
                        extra |= 1 << index[(v, n - 1)]
                cands.append(base | extra)
        masks = np.array(sorted(set(cands)), dtype=np.int64)
    forms = _min_forms(masks, n)
    return tuple(sorted(int(x) for x in set(forms.tolist())))


def nonisomorphic_graphs(n: int) -> list[Graph]:
    """All non-isomorphic graphs on exactly n nodes (n <= 7)."""
    if n > 7:
        raise GraphError("exhaustive enumeration supported up to 7 nodes")
    pairs = _edge_pairs(n)
    out = []
    for mask in _canonical_masks(n):
        edges = tuple(pairs[i] for i in range(len(pairs)) if mask >> i & 1)
        out.append(Graph(n, edges))
    return out


def nonisomorphic_graphs_up_to(max_n: int) -> list[Graph]:
    """All non-isomorphic graphs with 1..max_n nodes."""
    out = []
    for n in range(1, max_n + 1):
        out.extend(nonisomorphic_graphs(n))
    return out
