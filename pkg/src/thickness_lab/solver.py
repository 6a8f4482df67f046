"""Exact decision procedures for F-thickness, edge coloring, and independent sets.

Search is deterministic: edges are branched in a fixed order, parts are
opened under symmetry breaking, and the first certificate found is the
one returned.  Budgets (node-expansion cap plus wall-clock cap) turn an
over-long search into a distinct "unknown" outcome, never a wrong answer.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .classes import ClassDescriptor, max_member_edges
from .graph import Graph, GraphError, NodeSet, subgraph_of_ids


class BudgetExceededError(RuntimeError):
    """An exact answer was required but the search budget ran out."""


class OracleSizeError(RuntimeError):
    """Requested oracle enumeration exceeds the size guard."""


@dataclass(frozen=True)
class Budget:
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None

    def tracker(self) -> "BudgetTracker":
        return BudgetTracker(self)


class BudgetTracker:
    """Mutable expansion/time counter shared across the solves of one pipeline."""

    def __init__(self, budget: Budget):
        self.budget = budget
        self.nodes = 0
        self.started = time.monotonic()

    def tick(self) -> None:
        self.nodes += 1
        b = self.budget
        if b.max_nodes is not None and self.nodes > b.max_nodes:
            raise _BudgetStop
        if b.max_seconds is not None and self.nodes % 1024 == 0:
            if time.monotonic() - self.started > b.max_seconds:
                raise _BudgetStop


class _BudgetStop(Exception):
    pass


def _tracker(budget: Union[Budget, BudgetTracker, None]) -> Optional[BudgetTracker]:
    if budget is None:
        return None
    if isinstance(budget, BudgetTracker):
        return budget
    return budget.tracker()


@dataclass(frozen=True)
class EdgePartition:
    """Total assignment of host EdgeIds to parts 1..k."""

    host: Graph
    k: int
    assign: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 0:
            raise GraphError(f"negative part count {self.k}")
        if len(self.assign) != self.host.m:
            raise GraphError(f"assignment covers {len(self.assign)} of {self.host.m} edges")
        for eid, part in enumerate(self.assign):
            if not 1 <= part <= self.k:
                raise GraphError(f"edge {eid} assigned to part {part}, outside 1..{self.k}")

    def part_edge_ids(self, part: int) -> list[int]:
        return [eid for eid, p in enumerate(self.assign) if p == part]


@dataclass(frozen=True)
class EdgeColoring:
    """Assignment of host EdgeIds to colors 1..k; properness via verify_coloring."""

    host: Graph
    k: int
    color: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 0:
            raise GraphError(f"negative color count {self.k}")
        if len(self.color) != self.host.m:
            raise GraphError(f"coloring covers {len(self.color)} of {self.host.m} edges")
        for eid, c in enumerate(self.color):
            if not 1 <= c <= self.k:
                raise GraphError(f"edge {eid} colored {c}, outside 1..{self.k}")


@dataclass
class SolveStats:
    nodes_expanded: int = 0
    prune_membership: int = 0
    prune_density: int = 0
    elapsed: float = 0.0


@dataclass
class SolveResult:
    status: str  # "yes" | "no" | "unknown"
    certificate: Union[EdgePartition, EdgeColoring, None] = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def decision(self) -> bool:
        if self.status == "unknown":
            raise BudgetExceededError("no decision: budget exceeded")
        return self.status == "yes"

    def to_text(self) -> str:
        """Stable machine-readable rendering (no timing, fixed key order)."""
        lines = [f"decision {self.status}"]
        lines.append(f"stat nodes-expanded {self.stats.nodes_expanded}")
        lines.append(f"stat prune-density {self.stats.prune_density}")
        lines.append(f"stat prune-membership {self.stats.prune_membership}")
        cert = self.certificate
        if cert is not None:
            values = cert.assign if isinstance(cert, EdgePartition) else cert.color
            for eid, val in enumerate(values):
                u, v = cert.host.edges[eid]
                lines.append(f"edge {u} {v} -> {val}")
        return "\n".join(lines) + "\n"


def verify_partition(g: Graph, f: ClassDescriptor, p: EdgePartition) -> bool:
    if p.host != g:
        raise GraphError("partition is hosted by a different graph")
    return all(f.member(subgraph_of_ids(g, p.part_edge_ids(i))) for i in range(1, p.k + 1))


def verify_coloring(g: Graph, c: EdgeColoring) -> bool:
    if c.host != g:
        raise GraphError("coloring is hosted by a different graph")
    for v in range(g.n):
        seen = set()
        for w in g.neighbors(v):
            col = c.color[g.edge_id(v, w)]
            if col in seen:
                return False
            seen.add(col)
    return True


def thickness_decide(
    g: Graph, f: ClassDescriptor, k: int, budget: Union[Budget, BudgetTracker, None] = None
) -> SolveResult:
    """Exact decision of theta_F(g) <= k by branch and bound.

    Monotone classes allow pruning as soon as a part leaves F; for
    non-monotone classes the search degrades to exhaustive enumeration with
    membership checked on complete parts only.
    """
    if k < 0:
        raise GraphError(f"negative k: {k}")
    stats = SolveStats()
    t0 = time.monotonic()
    tracker = _tracker(budget)
    m = g.m

    def done(status: str, cert: Optional[EdgePartition] = None) -> SolveResult:
        stats.elapsed = time.monotonic() - t0
        res = SolveResult(status, cert, stats)
        if status == "yes":
            assert cert is not None and verify_partition(g, f, cert)
        return res

    if m == 0:
        if k == 0 or f.member(Graph(g.n)):
            return done("yes", EdgePartition(g, k, ()))
        return done("no")
    if k == 0:
        return done("no")

    d = f.density_coefficient
    if d is not None and m > k * d * g.n:
        # Sum of part capacities D*n can never cover the edges.
        stats.prune_density += 1
        return done("no")

    if not f.monotone:
        try:
            parts = _exhaustive_partition(g, f, k, tracker, stats)
        except _BudgetStop:
            return done("unknown")
        if parts is None:
            return done("no")
        return done("yes", _parts_to_partition(g, k, parts))

    try:
        assign = _forward_checking_search(g, f, k, tracker, stats)
    except _BudgetStop:
        return done("unknown")
    if assign is None:
        return done("no")
    return done("yes", EdgePartition(g, k, tuple(assign)))


def _forward_checking_search(
    g: Graph,
    f: ClassDescriptor,
    k: int,
    tracker: Optional[BudgetTracker],
    stats: SolveStats,
) -> Optional[list[int]]:
    """Fail-first search with forward checking, sound for monotone classes.

    Per open part, every unassigned edge keeps an "accepted" bit; a part
    only ever loses acceptors as it grows (monotonicity), so bits are
    cleared permanently within a branch.  The next edge branched on is the
    one with the fewest remaining placements (ties by EdgeId), which makes
    forced placements cascade and keeps refutations shallow.  All empty
    parts are interchangeable, so at most one "open a new part" branch is
    explored per node.
    """
    m = g.m
    cap = max_member_edges(f, g.n)
    member_cache: dict[tuple[int, ...], bool] = {}

    def accepts(part: list[int], eid: int) -> bool:
        key = tuple(sorted(part + [eid]))
        hit = member_cache.get(key)
        if hit is None:
            hit = f.member(subgraph_of_ids(g, key))
            member_cache[key] = hit
        return hit

    singleton_ok = [accepts([], e) for e in range(m)]
    if not all(singleton_ok):
        stats.prune_membership += 1
        return None

    part_edges: list[list[int]] = [[] for _ in range(k)]
    allowed: list[int] = [0] * m  # bit p set: open part p currently accepts the edge
    assign = [0] * m
    unassigned = set(range(m))

    def choices(eid: int, used: int) -> int:
        c = bin(allowed[eid]).count("1")
        if used < k:
            c += 1
        return c

    def capacity_fails(used: int) -> bool:
        # Hall-style count: edges confined to a set of parts need enough slack.
        if cap is None:
            return False
        pool = (k - used) * cap
        counts = [0] * (1 << used)
        for e in unassigned:
            counts[allowed[e]] += 1
        slack = [cap - len(part_edges[p]) for p in range(used)]
        for sub in range(1, 1 << used):
            need = sum(counts[msk] for msk in range(1 << used) if msk & ~sub == 0)
            avail = sum(slack[p] for p in range(used) if sub >> p & 1) + pool
            if need > avail:
                stats.prune_density += 1
                return True
        return False

    def search(used: int) -> bool:
        if not unassigned:
            return True
        stats.nodes_expanded += 1
        if tracker is not None:
            tracker.tick()
        if capacity_fails(used):
            return False
        eid = min(unassigned, key=lambda e: (choices(e, used), e))
        if choices(eid, used) == 0:
            return False
        unassigned.remove(eid)
        options = [p for p in range(used) if allowed[eid] >> p & 1]
        if used < k:
            options.append(used)
        for p in options:
            new_used = max(used, p + 1)
            part_edges[p].append(eid)
            assign[eid] = p + 1
            undo: list[tuple[int, int]] = []
            conflict = False
            for other in unassigned:
                if p < used and not (allowed[other] >> p & 1):
                    continue
                old = allowed[other]
                if accepts(part_edges[p], other):
                    new = old | (1 << p)
                else:
                    new = old & ~(1 << p)
                    stats.prune_membership += 1
                if new != old:
                    allowed[other] = new
                    undo.append((other, old))
                if new == 0 and new_used >= k:
                    conflict = True
                    break
            if not conflict and search(new_used):
                return True
            for other, old in undo:
                allowed[other] = old
            part_edges[p].pop()
            assign[eid] = 0
        unassigned.add(eid)
        return False

    if m == 0:
        return assign
    return assign if search(0) else None


def _parts_to_partition(g: Graph, k: int, part_masks: list[int]) -> EdgePartition:
    assign = [0] * g.m
    for idx, mask in enumerate(part_masks, start=1):
        for eid in range(g.m):
            if mask >> eid & 1:
                assign[eid] = idx
    # edges never left unassigned: masks partition the full edge set
    return EdgePartition(g, k, tuple(assign))


def _exhaustive_partition(
    g: Graph,
    f: ClassDescriptor,
    k: int,
    tracker: Optional[BudgetTracker],
    stats: SolveStats,
    member_cache: Optional[dict[int, bool]] = None,
) -> Optional[list[int]]:
    """Enumerate unordered partitions of the edge set into k parts.

    Every part is anchored at the lowest remaining EdgeId, so each
    unordered partition is visited exactly once; membership is consulted
    only for complete candidate parts.  Returns part bitmasks or None.
    """
    m = g.m
    if member_cache is None:
        member_cache = {}

    def memb(mask: int) -> bool:
        r = member_cache.get(mask)
        if r is None:
            ids = [eid for eid in range(m) if mask >> eid & 1]
            r = f.member(subgraph_of_ids(g, ids))
            member_cache[mask] = r
        return r

    failed: set[tuple[int, int]] = set()

    def can(mask: int, j: int) -> Optional[list[int]]:
        if mask == 0:
            if j == 0:
                return []
            return [0] * j if memb(0) else None
        if j == 0:
            return None
        if j == 1:
            return [mask] if memb(mask) else None
        if (mask, j) in failed:
            return None
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            stats.nodes_expanded += 1
            if tracker is not None:
                tracker.tick()
            part = low | sub
            if memb(part):
                tail = can(mask ^ part, j - 1)
                if tail is not None:
                    return [part] + tail
            if sub == 0:
                break
            sub = (sub - 1) & rest
        failed.add((mask, j))
        return None

    return can((1 << m) - 1, k)


def thickness_oracle(
    g: Graph,
    f: ClassDescriptor,
    k: int,
    *,
    guard: int = 10**7,
    member_cache: Optional[dict[int, bool]] = None,
) -> SolveResult:
    """Independent exhaustive oracle: no pruning beyond part-label symmetry.

    Enumerates every partition of the edge set into at most k parts and
    tests membership on complete parts only.  Guarded by k^m <= guard;
    member_cache may be shared across calls on the same (g, f).
    """
    if k < 0:
        raise GraphError(f"negative k: {k}")
    m = g.m
    if m > 0 and k > 1 and k**m > guard:
        raise OracleSizeError(f"{k}^{m} assignments exceed the oracle guard {guard}")
    stats = SolveStats()
    t0 = time.monotonic()
    if m == 0:
        ok = k == 0 or f.member(Graph(g.n))
        stats.elapsed = time.monotonic() - t0
        return SolveResult("yes" if ok else "no", EdgePartition(g, k, ()) if ok else None, stats)
    if k == 0:
        stats.elapsed = time.monotonic() - t0
        return SolveResult("no", None, stats)
    parts = _exhaustive_partition(g, f, k, None, stats, member_cache)
    stats.elapsed = time.monotonic() - t0
    if parts is None:
        return SolveResult("no", None, stats)
    return SolveResult("yes", _parts_to_partition(g, k, parts), stats)


def thickness_exact(g: Graph, f: ClassDescriptor, budget: Union[Budget, BudgetTracker, None] = None) -> int:
    """Smallest k with a yes decision; 0 for edgeless graphs."""
    tracker = _tracker(budget)
    for k in range(0, g.m + 1):
        res = thickness_decide(g, f, k, tracker)
        if res.status == "unknown":
            raise BudgetExceededError(f"budget exceeded while deciding k={k}")
        if res.status == "yes":
            return k
    raise GraphError(f"graph admits no partition into parts from {f.name!r} at any k")


def edge_color_decide(
    g: Graph, k: int, budget: Union[Budget, BudgetTracker, None] = None
) -> SolveResult:
    """Exact proper k-edge-coloring decision by backtracking.

    Edges are processed in canonical EdgeId order; a new color class may be
    opened only as the next unused index, which fixes one representative
    per color-permutation orbit.
    """
    if k < 0:
        raise GraphError(f"negative k: {k}")
    stats = SolveStats()
    t0 = time.monotonic()
    tracker = _tracker(budget)
    m = g.m

    def done(status: str, cert: Optional[EdgeColoring] = None) -> SolveResult:
        stats.elapsed = time.monotonic() - t0
        res = SolveResult(status, cert, stats)
        if status == "yes":
            assert cert is not None and verify_coloring(g, cert)
        return res

    if m == 0:
        return done("yes", EdgeColoring(g, k, ()))
    if k == 0 or k < max(g.degree(v) for v in range(g.n)):
        return done("no")

    node_used = [0] * g.n  # bitmask of colors at each node (bit c-1 = color c)
    color = [0] * m

    def place(eid: int, used: int) -> bool:
        if eid == m:
            return True
        u, v = g.edges[eid]
        blocked = node_used[u] | node_used[v]
        limit = min(used + 1, k)
        for c in range(1, limit + 1):
            bit = 1 << (c - 1)
            if blocked & bit:
                continue
            stats.nodes_expanded += 1
            if tracker is not None:
                tracker.tick()
            node_used[u] |= bit
            node_used[v] |= bit
            color[eid] = c
            if place(eid + 1, max(used, c)):
                return True
            color[eid] = 0
            node_used[u] &= ~bit
            node_used[v] &= ~bit
        return False

    try:
        found = place(0, 0)
    except _BudgetStop:
        return done("unknown")
    if not found:
        return done("no")
    return done("yes", EdgeColoring(g, k, tuple(color)))


def enumerate_colorings(g: Graph, k: int, limit: Optional[int] = None) -> Iterator[EdgeColoring]:
    """All proper k-edge-colorings (no symmetry reduction), lexicographic order."""
    m = g.m
    if m == 0:
        yield EdgeColoring(g, k, ())
        return
    node_used = [0] * g.n
    color = [0] * m
    count = 0

    def walk(eid: int) -> Iterator[EdgeColoring]:
        nonlocal count
        if eid == m:
            yield EdgeColoring(g, k, tuple(color))
            return
        u, v = g.edges[eid]
        blocked = node_used[u] | node_used[v]
        for c in range(1, k + 1):
            bit = 1 << (c - 1)
            if blocked & bit:
                continue
            node_used[u] |= bit
            node_used[v] |= bit
            color[eid] = c
            yield from walk(eid + 1)
            color[eid] = 0
            node_used[u] &= ~bit
            node_used[v] &= ~bit

    for col in walk(0):
        yield col
        count += 1
        if limit is not None and count >= limit:
            return


def chromatic_index(g: Graph, budget: Union[Budget, BudgetTracker, None] = None) -> int:
    """Exact chromatic index; the maximum degree is a lower bound only."""
    if g.m == 0:
        return 0
    tracker = _tracker(budget)
    delta = max(g.degree(v) for v in range(g.n))
    for k in range(delta, g.m + 1):
        res = edge_color_decide(g, k, tracker)
        if res.status == "unknown":
            raise BudgetExceededError(f"budget exceeded while deciding k={k}")
        if res.status == "yes":
            return k
    raise AssertionError("unreachable: m colors always suffice")


def caro_wei_target(g: Graph) -> int:
    """ceil(n^2 / (n + 2m)): the independence number guaranteed for any graph."""
    if g.n == 0:
        return 0
    denom = g.n + 2 * g.m
    return -(-g.n * g.n // denom)


def independent_set_atleast(
    g: Graph, target: int, budget: Union[Budget, BudgetTracker, None] = None
) -> Optional[NodeSet]:
    """Independent set of size >= target, or None if exact search refutes one.

    Greedy minimum-degree selection meets the Caro-Wei bound; an exact
    branch and bound runs only when the greedy set falls short.
    """
    if target <= 0:
        return NodeSet(g, frozenset())
    greedy = _greedy_independent(g)
    if len(greedy) >= target:
        return NodeSet(g, frozenset(greedy))
    tracker = _tracker(budget)
    best = _exact_independent(g, target, tracker)
    if best is None:
        return None
    return NodeSet(g, frozenset(best))


def greedy_independent_set(g: Graph) -> NodeSet:
    """Minimum-degree greedy independent set (meets the Caro-Wei bound)."""
    return NodeSet(g, frozenset(_greedy_independent(g)))


def _greedy_independent(g: Graph) -> list[int]:
    alive = set(range(g.n))
    deg = {v: g.degree(v) for v in alive}
    chosen = []
    while alive:
        v = min(alive, key=lambda w: (deg[w], w))
        chosen.append(v)
        removed = {v} | (set(g.neighbors(v)) & alive)
        for w in removed:
            alive.discard(w)
        for w in removed:
            for x in g.neighbors(w):
                if x in alive:
                    deg[x] -= 1
    return sorted(chosen)


def _exact_independent(g: Graph, target: int, tracker: Optional[BudgetTracker]) -> Optional[list[int]]:
    n = g.n
    full = (1 << n) - 1
    adj = [0] * n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    def search(candidates: int, chosen: list[int]) -> Optional[list[int]]:
        if len(chosen) >= target:
            return chosen
        if len(chosen) + bin(candidates).count("1") < target:
            return None
        if tracker is not None:
            try:
                tracker.tick()
            except _BudgetStop:
                raise BudgetExceededError("independent-set search budget exceeded") from None
        b = candidates & -candidates
        v = b.bit_length() - 1
        with_v = search(candidates & ~(b | adj[v]), chosen + [v])
        if with_v is not None:
            return with_v
        return search(candidates ^ b, chosen)

    return search(full, [])


def parse_partition_text(text: str, host: Graph, k: int) -> EdgePartition:
    """Read 'edge u v -> part' lines (other lines ignored) into a partition."""
    assign = [0] * host.m
    seen = [False] * host.m
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if len(fields) != 5 or fields[0] != "edge" or fields[3] != "->":
            continue
        try:
            u, v, part = int(fields[1]), int(fields[2]), int(fields[4])
        except ValueError:
            raise GraphError(f"line {lineno}: malformed edge assignment {raw!r}") from None
        eid = host.edge_id(u, v)
        if seen[eid]:
            raise GraphError(f"line {lineno}: duplicate assignment for edge ({u}, {v})")
        seen[eid] = True
        assign[eid] = part
    missing = [i for i, s in enumerate(seen) if not s]
    if missing:
        u, v = host.edges[missing[0]]
        raise GraphError(f"partition file misses edge ({u}, {v})")
    return EdgePartition(host, k, tuple(assign))
