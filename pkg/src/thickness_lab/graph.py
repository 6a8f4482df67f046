"""Immutable simple-graph values and structural operations.

Node ids are dense 0..n-1.  Edges are stored canonically: every pair is
normalized to (u, v) with u < v and the edge list is sorted
lexicographically.  An edge's position in that sorted list is its stable
EdgeId; all certificates and provenance maps are expressed in EdgeIds.
Operations are pure; the ones that delete nodes return an explicit
old->new id map so callers can track nodes through a pipeline.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Malformed graph input or violated operation precondition."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError(f"negative node count: {self.n}")
        canon = []
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"loop at node {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= self.n:
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            canon.append((u, v))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise GraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def _adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_index

    def edge_id(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        try:
            return self._edge_index[(u, v)]
        except KeyError:
            raise GraphError(f"no edge ({u}, {v})") from None

    def non_edges(self) -> Iterator[tuple[int, int]]:
        for u, v in itertools.combinations(range(self.n), 2):
            if (u, v) not in self._edge_index:
                yield (u, v)

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges + ((u, v),))


@dataclass(frozen=True)
class EdgeSet:
    """Subset of a host graph's EdgeIds; the host is recorded for validation."""

    host: Graph
    indices: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "indices", frozenset(self.indices))
        for i in self.indices:
            if not 0 <= i < self.host.m:
                raise GraphError(f"edge index {i} out of range for host with m={self.host.m}")

    def __contains__(self, i: int) -> bool:
        return i in self.indices

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.indices))

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [self.host.edges[i] for i in sorted(self.indices)]


@dataclass(frozen=True)
class NodeSet:
    """Subset of a host graph's node ids."""

    host: Graph
    ids: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ids", frozenset(self.ids))
        for v in self.ids:
            if not 0 <= v < self.host.n:
                raise GraphError(f"node id {v} out of range for host with n={self.host.n}")

    def __contains__(self, v: int) -> bool:
        return v in self.ids

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.ids))

    def is_independent(self) -> bool:
        members = sorted(self.ids)
        return not any(self.host.has_edge(u, v) for u, v in itertools.combinations(members, 2))


def parse_edge_list(text: str) -> Graph:
    """Parse the plain edge-list format.

    First non-comment line is "n m", followed by m lines "u v" (0-based).
    Lines starting with '#' are comments; blank lines are ignored.
    """
    lines = [
        (lineno, line.strip())
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise GraphError("empty input: missing header line")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphError(f"line {lineno}: expected header 'n m', got {header!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphError(f"line {lineno}: non-integer header {header!r}") from None
    if len(lines) - 1 != m:
        raise GraphError(f"header declares {m} edges but input has {len(lines) - 1}")
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for lineno, line in lines[1:]:
        fields = line.split()
        if len(fields) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer endpoint in {line!r}") from None
        if u == v:
            raise GraphError(f"line {lineno}: loop at node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {lineno}: node id out of range 0..{n - 1}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    return Graph(n, tuple(edges))


def serialize_edge_list(g: Graph) -> str:
    """Serialize to the edge-list format: sorted edges, LF endings."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def one_sum(g1: Graph, v1: int, g2: Graph, v2: int) -> Graph:
    """Glue g1 and g2 by identifying v1 and v2 into a single node.

    Nodes of g1 keep their ids; the remaining nodes of g2 follow in order.
    """
    if not 0 <= v1 < g1.n:
        raise GraphError(f"node {v1} out of range for first graph")
    if not 0 <= v2 < g2.n:
        raise GraphError(f"node {v2} out of range for second graph")

    def remap(w: int) -> int:
        if w == v2:
            return v1
        return g1.n + w if w < v2 else g1.n + w - 1

    edges = list(g1.edges) + [(remap(u), remap(v)) for u, v in g2.edges]
    return Graph(g1.n + g2.n - 1, tuple(edges))


def smooth_degree_two(g: Graph, v: int) -> tuple[Graph, dict[int, int]]:
    """Remove a degree-2 node, joining its two neighbors by a new edge.

    Refuses when the neighbors are already adjacent (the result would have
    a parallel edge).  Returns the new graph and the old->new node id map.
    """
    if not 0 <= v < g.n:
        raise GraphError(f"node {v} out of range")
    nbrs = g.neighbors(v)
    if len(nbrs) != 2:
        raise GraphError(f"node {v} has degree {len(nbrs)}, not 2")
    x, y = nbrs
    if g.has_edge(x, y):
        raise GraphError(f"neighbors {x} and {y} already adjacent; smoothing would create a parallel edge")
    idmap = {w: (w if w < v else w - 1) for w in range(g.n) if w != v}
    edges = [(idmap[a], idmap[b]) for a, b in g.edges if v not in (a, b)]
    edges.append((idmap[x], idmap[y]))
    return Graph(g.n - 1, tuple(edges)), idmap


def subdivide_edge(g: Graph, e: int) -> Graph:
    """Replace edge e = {u, v} by a length-2 path u-w-v through a fresh node w."""
    if not 0 <= e < g.m:
        raise GraphError(f"edge id {e} out of range")
    u, v = g.edges[e]
    w = g.n
    edges = [p for i, p in enumerate(g.edges) if i != e]
    edges.extend([(u, w), (v, w)])
    return Graph(g.n + 1, tuple(edges))


def subgraph(g: Graph, es: EdgeSet) -> Graph:
    """Spanning subgraph with exactly the edges of es; isolated nodes retained."""
    if es.host != g:
        raise GraphError("edge set is hosted by a different graph")
    return Graph(g.n, tuple(es.edge_pairs()))


def subgraph_of_ids(g: Graph, edge_ids: Iterable[int]) -> Graph:
    """Like subgraph, for a bare iterable of EdgeIds (solver hot path)."""
    return Graph(g.n, tuple(g.edges[i] for i in edge_ids))


def add_apex(g: Graph) -> Graph:
    """Add one fresh node adjacent to every node of g."""
    apex = g.n
    return Graph(g.n + 1, g.edges + tuple((v, apex) for v in range(g.n)))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    edges = list(g1.edges) + [(u + g1.n, v + g1.n) for u, v in g2.edges]
    return Graph(g1.n + g2.n, tuple(edges))


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted node lists, ordered by smallest member."""
    seen = [False] * g.n
    comps: list[list[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def degrees(g: Graph) -> tuple[int, ...]:
    return tuple(g.degree(v) for v in range(g.n))


def is_k_regular(g: Graph, k: int) -> bool:
    return all(g.degree(v) == k for v in range(g.n))


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Exact isomorphism by backtracking node matching; for small graphs only."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(degrees(g1)) != sorted(degrees(g2)):
        return False
    n = g1.n
    # order g1 nodes by descending degree for early mismatch
    order = sorted(range(n), key=lambda v: -g1.degree(v))
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        dv = g1.degree(v)
        for w in range(n):
            if used[w] or g2.degree(w) != dv:
                continue
            ok = True
            for u in g1.neighbors(v):
                iu = image[u]
                if iu >= 0 and not g2.has_edge(iu, w):
                    ok = False
                    break
            if ok:
                # mapped non-neighbors must stay non-adjacent
                for u in order[:i]:
                    if not g1.has_edge(u, v) and g2.has_edge(image[u], w):
                        ok = False
                        break
            if ok:
                image[v] = w
                used[w] = True
                if extend(i + 1):
                    return True
                image[v] = -1
                used[w] = False
        return False

    return extend(0)
