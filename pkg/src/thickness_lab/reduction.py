"""The hardness-reduction pipeline.

Stages: a short-path edge labeling of the source graph, an edge-maximal
gadget graph with a large independent set, assembly of the combined
instance with connector edges, and certificate translation between proper
edge colorings of the source and edge partitions of the instance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .classes import ClassDescriptor
from .graph import Graph, GraphError, NodeSet
from .solver import (
    Budget,
    BudgetExceededError,
    BudgetTracker,
    EdgeColoring,
    EdgePartition,
    _tracker,
    greedy_independent_set,
    independent_set_atleast,
    thickness_decide,
    verify_coloring,
)


class ReductionRefused(ValueError):
    """Input class or graph violates a hypothesis of the construction."""


class GadgetIndependenceError(RuntimeError):
    def __init__(self, target: int, achieved: int):
        super().__init__(
            f"gadget independent set has {achieved} nodes, below target {target}; raise C"
        )
        self.target = target
        self.achieved = achieved


@dataclass(frozen=True)
class Labeling:
    """Edge labels 1..label_count; edges of any path of length <= 3 get distinct labels."""

    host: Graph
    phi: tuple[int, ...]
    label_count: int

    def __post_init__(self) -> None:
        if len(self.phi) != self.host.m:
            raise GraphError("labeling does not cover every edge")
        if any(not 1 <= lab <= self.label_count for lab in self.phi):
            raise GraphError("label outside 1..label_count")


@dataclass(frozen=True)
class GadgetGraph:
    h: Graph
    k: int
    class_name: str
    witness_partition: Optional[EdgePartition]
    indep: NodeSet
    edge_maximal: str  # "verified" | "assumed"
    thickness_is_k: bool = False

    def __post_init__(self) -> None:
        if self.edge_maximal not in ("verified", "assumed"):
            raise GraphError(f"bad edge_maximal flag {self.edge_maximal!r}")
        if self.indep.host != self.h:
            raise GraphError("independent set hosted by a different graph")
        if not self.indep.is_independent():
            raise GraphError("declared independent set contains an edge")
        if self.witness_partition is not None and self.witness_partition.host != self.h:
            raise GraphError("witness partition hosted by a different graph")


@dataclass(frozen=True)
class Origin:
    """Provenance of one instance edge."""

    kind: str  # "source" | "gadget" | "connector"
    edge: int  # source EdgeId, or gadget EdgeId for kind == "gadget"
    side: Optional[str] = None  # "u" | "v" for connectors

    def __post_init__(self) -> None:
        if self.kind not in ("source", "gadget", "connector"):
            raise GraphError(f"bad origin kind {self.kind!r}")
        if (self.side is not None) != (self.kind == "connector"):
            raise GraphError("side is set exactly for connector edges")


@dataclass(frozen=True)
class ReducedInstance:
    gprime: Graph
    source: Graph
    gadget: GadgetGraph
    labeling: Labeling
    edge_origin: tuple[Origin, ...]
    source_node_map: tuple[int, ...]
    gadget_node_map: tuple[int, ...]
    w_nodes: tuple[int, ...]  # label l (1-based) -> node of gprime
    mode: str  # "paper" | "relaxed"

    def source_edge_to_gprime(self) -> list[int]:
        out = [-1] * self.source.m
        for gp_eid, org in enumerate(self.edge_origin):
            if org.kind == "source":
                out[org.edge] = gp_eid
        return out


def conflict_pairs(g: Graph) -> set[tuple[int, int]]:
    """Pairs of edges that lie together on some path of length <= 3.

    Structurally: the edges share an endpoint, or they are disjoint and
    some edge of g joins an endpoint of one to an endpoint of the other.
    """
    pairs: set[tuple[int, int]] = set()
    for e, f in itertools.combinations(range(g.m), 2):
        a, b = g.edges[e]
        c, d = g.edges[f]
        if len({a, b, c, d}) < 4:
            pairs.add((e, f))
        elif g.has_edge(a, c) or g.has_edge(a, d) or g.has_edge(b, c) or g.has_edge(b, d):
            pairs.add((e, f))
    return pairs


def conflict_pairs_by_paths(g: Graph) -> set[tuple[int, int]]:
    """Independent verifier: explicit enumeration of simple paths of length 2 and 3."""
    pairs: set[tuple[int, int]] = set()
    for b in range(g.n):
        for a, c in itertools.combinations(g.neighbors(b), 2):
            pairs.add(tuple(sorted((g.edge_id(a, b), g.edge_id(b, c)))))
    for mid in range(g.m):
        b, c = g.edges[mid]
        for a in g.neighbors(b):
            if a == c:
                continue
            for d in g.neighbors(c):
                if d == b or d == a:
                    continue
                e1 = g.edge_id(a, b)
                e3 = g.edge_id(c, d)
                for x, y in ((e1, mid), (mid, e3), (e1, e3)):
                    pairs.add(tuple(sorted((x, y))))
    return pairs


def label_short_paths(g: Graph, k: int) -> Labeling:
    """Greedy first-fit labeling against the conflict pairs, in EdgeId order.

    For a k-regular graph at most 2k(k-1)+1 labels are ever needed; for
    irregular graphs the same bound holds with the maximum degree.
    """
    conflicts = conflict_pairs(g)
    neighbors: list[list[int]] = [[] for _ in range(g.m)]
    for e, f in conflicts:
        neighbors[e].append(f)
        neighbors[f].append(e)
    phi = [0] * g.m
    for eid in range(g.m):
        taken = {phi[f] for f in neighbors[eid] if f < eid}
        lab = 1
        while lab in taken:
            lab += 1
        phi[eid] = lab
    label_count = max(phi, default=0)
    if g.m == 0:
        return Labeling(g, (), 0)
    deg = max(g.degree(v) for v in range(g.n))
    bound_deg = k if all(g.degree(v) == k for v in range(g.n)) else deg
    assert label_count <= 2 * bound_deg * (bound_deg - 1) + 1, "greedy exceeded the labeling bound"
    return Labeling(g, tuple(phi), label_count)


def choose_C(label_count: int, f: ClassDescriptor, k: int) -> int:
    """Smallest gadget size C with C > (1 + 2kD) * label_count.

    D is the declared class density coefficient.  The choice also has to
    leave the complete graph on C nodes out of reach of k parts, which is
    re-asserted here against the class edge budget.
    """
    if label_count < 1:
        raise GraphError(f"label count must be positive, got {label_count}")
    d = f.density_coefficient
    if d is None:
        raise ReductionRefused(f"class {f.name!r} has no finite density coefficient")
    threshold = (1 + 2 * k * d) * label_count
    c = int(threshold) + 1 if threshold == int(threshold) else math.ceil(threshold)
    assert Fraction(c * (c - 1), 2) > k * d * c, "gadget size too small for the class budget"
    if f.name == "outerplanar":
        assert c * (c - 1) // 2 > k * (2 * c - 3), "outerplanar edge budget not exceeded"
    return c


def _class_edge_budget(f: ClassDescriptor, c: int, k: int) -> Optional[Fraction]:
    """Upper bound on edges of any C-node graph with F-thickness <= k."""
    if f.name == "outerplanar" and c >= 2:
        return Fraction(k * (2 * c - 3))
    if f.density_coefficient is None:
        return None
    return k * f.density_coefficient * c


def build_gadget(
    c: int,
    f: ClassDescriptor,
    k: int,
    target_indep: int,
    budget: Union[Budget, BudgetTracker, None] = None,
) -> GadgetGraph:
    """Greedy edge-maximal graph on C nodes with F-thickness at most k.

    Non-edges are tried in lexicographic order and kept whenever the solver
    still certifies thickness <= k.  Monotone F makes the greedy sound: a
    rejected edge stays rejected.  A final re-scan certifies maximality.
    """
    if not f.monotone:
        raise ReductionRefused(f"gadget greedy requires a monotone class, not {f.name!r}")
    if c < 3:
        raise GraphError(f"gadget size must be at least 3, got {c}")
    tracker = _tracker(budget)
    h = Graph(c)
    witness: Optional[EdgePartition] = None
    for u, v in itertools.combinations(range(c), 2):
        candidate = h.with_edge(u, v)
        res = thickness_decide(candidate, f, k, tracker)
        if res.status == "unknown":
            raise BudgetExceededError(f"gadget construction budget exceeded at edge ({u}, {v})")
        if res.status == "yes":
            h = candidate
            witness = res.certificate
    if witness is None:
        witness = EdgePartition(h, k, ())

    # Re-scan: every remaining non-edge must push the thickness past k.
    for u, v in h.non_edges():
        res = thickness_decide(h.with_edge(u, v), f, k, tracker)
        if res.status == "unknown":
            raise BudgetExceededError(f"maximality re-scan budget exceeded at edge ({u}, {v})")
        if res.status == "yes":
            raise AssertionError(f"greedy gadget not edge-maximal: ({u}, {v}) still fits")

    indep = independent_set_atleast(h, target_indep, tracker)
    if indep is None:
        raise GadgetIndependenceError(target_indep, len(greedy_independent_set(h)))

    budget_edges = _class_edge_budget(f, c, k)
    certified = budget_edges is not None and Fraction(c * (c - 1), 2) > budget_edges
    return GadgetGraph(
        h=h,
        k=k,
        class_name=f.name,
        witness_partition=witness,
        indep=indep,
        edge_maximal="verified",
        thickness_is_k=certified,
    )


def relaxed_gadget(label_count: int, f: ClassDescriptor, k: int) -> GadgetGraph:
    """Edgeless stand-in gadget: valid for forward-direction testing only."""
    h = Graph(max(label_count, 1))
    return GadgetGraph(
        h=h,
        k=k,
        class_name=f.name,
        witness_partition=EdgePartition(h, k, ()),
        indep=NodeSet(h, frozenset(range(h.n))),
        edge_maximal="assumed",
        thickness_is_k=False,
    )


def assemble(g: Graph, lab: Labeling, gadget: GadgetGraph, mode: str = "relaxed") -> ReducedInstance:
    """Join disjoint copies of g and the gadget with two connector edges per source edge.

    Source edge e = {u, v} with label l gets connectors {u, w_l} and
    {v, w_l}, where w_1..w_L are the first L nodes of the gadget's
    independent set.  Distinct labels at a common node keep the result simple.
    """
    if lab.host != g:
        raise GraphError("labeling is hosted by a different graph")
    if lab.label_count > len(gadget.indep):
        raise ReductionRefused(
            f"gadget offers {len(gadget.indep)} independent nodes, need {lab.label_count}"
        )
    offset = g.n
    source_map = tuple(range(g.n))
    gadget_map = tuple(offset + i for i in range(gadget.h.n))
    indep_sorted = sorted(gadget.indep)
    w_nodes = tuple(offset + indep_sorted[l] for l in range(lab.label_count))

    tagged: list[tuple[tuple[int, int], Origin]] = []
    for eid, (u, v) in enumerate(g.edges):
        tagged.append(((u, v), Origin("source", eid)))
    for heid, (u, v) in enumerate(gadget.h.edges):
        tagged.append(((u + offset, v + offset), Origin("gadget", heid)))
    for eid, (u, v) in enumerate(g.edges):
        w = w_nodes[lab.phi[eid] - 1]
        tagged.append(((u, w), Origin("connector", eid, "u")))
        tagged.append(((v, w), Origin("connector", eid, "v")))

    tagged.sort(key=lambda t: t[0])
    for (e1, o1), (e2, o2) in zip(tagged, tagged[1:]):
        if e1 == e2:
            raise AssertionError(f"connector collision at {e1}: labeling not short-path distinct")
    gprime = Graph(g.n + gadget.h.n, tuple(e for e, _ in tagged))
    return ReducedInstance(
        gprime=gprime,
        source=g,
        gadget=gadget,
        labeling=lab,
        edge_origin=tuple(o for _, o in tagged),
        source_node_map=source_map,
        gadget_node_map=gadget_map,
        w_nodes=w_nodes,
        mode=mode,
    )


def forward_certificate(coloring: EdgeColoring, inst: ReducedInstance) -> EdgePartition:
    """Partition of the instance induced by a proper coloring of the source.

    Part i takes the gadget witness part i plus, for every source edge of
    color i, the triangle formed by the edge and its two connectors.
    """
    if coloring.host != inst.source:
        raise GraphError("coloring is hosted by a different graph")
    if coloring.k != inst.gadget.k:
        raise GraphError(f"coloring uses {coloring.k} colors, gadget expects {inst.gadget.k}")
    if not verify_coloring(inst.source, coloring):
        raise GraphError("coloring is not proper")
    witness = inst.gadget.witness_partition
    if witness is None:
        raise GraphError("instance gadget carries no witness partition")
    assign = [0] * inst.gprime.m
    for gp_eid, org in enumerate(inst.edge_origin):
        if org.kind == "gadget":
            assign[gp_eid] = witness.assign[org.edge]
        else:
            assign[gp_eid] = coloring.color[org.edge]
    return EdgePartition(inst.gprime, inst.gadget.k, tuple(assign))


@dataclass(frozen=True)
class ExtractOutcome:
    coloring: Optional[EdgeColoring]
    violation: Optional[tuple[int, int, int]]  # (shared node, source EdgeId, source EdgeId)

    @property
    def ok(self) -> bool:
        return self.coloring is not None


def extract_coloring(p: EdgePartition, inst: ReducedInstance) -> ExtractOutcome:
    """Read a source coloring off an instance partition.

    Fails (with a witnessing length-2 path of the source) when two incident
    source edges land in the same part; with an adequate verified gadget
    that cannot happen, with an undersized one it is a legitimate outcome.
    """
    if p.host != inst.gprime:
        raise GraphError("partition is hosted by a different graph")
    if p.k != inst.gadget.k:
        raise GraphError(f"partition has {p.k} parts, instance expects {inst.gadget.k}")
    to_gprime = inst.source_edge_to_gprime()
    color = tuple(p.assign[to_gprime[eid]] for eid in range(inst.source.m))
    g = inst.source
    for b in range(g.n):
        for a, c in itertools.combinations(g.neighbors(b), 2):
            e1, e2 = g.edge_id(a, b), g.edge_id(b, c)
            if color[e1] == color[e2]:
                return ExtractOutcome(None, (b, min(e1, e2), max(e1, e2)))
    return ExtractOutcome(EdgeColoring(g, p.k, color), None)


def reduce_instance(
    g: Graph,
    f: ClassDescriptor,
    k: int,
    mode: str = "paper",
    budget: Union[Budget, BudgetTracker, None] = None,
) -> ReducedInstance:
    """Full reduction pipeline from a k-regular source graph.

    Paper mode builds the verified edge-maximal gadget at the derived size
    C (this is expected to exhaust reasonable budgets beyond toy classes);
    relaxed mode substitutes the edgeless gadget, which supports only
    forward-direction experiments and is flagged as such in the instance.
    """
    if mode not in ("paper", "relaxed"):
        raise GraphError(f"unknown mode {mode!r}")
    for flag, label in (
        (f.closed_topo_minors, "condition (a) fails: not closed under topological minors"),
        (f.closed_one_sums, "condition (b) fails: not closed under 1-sums"),
        (f.contains_c3, "condition (c) fails: class lacks a triangle"),
    ):
        if not flag:
            raise ReductionRefused(f"class {f.name!r} refused: {label}")
    if any(g.degree(v) != k for v in range(g.n)):
        raise ReductionRefused(f"source graph is not {k}-regular")
    lab = label_short_paths(g, k)
    if mode == "relaxed":
        gadget = relaxed_gadget(lab.label_count, f, k)
    else:
        c = choose_C(lab.label_count, f, k)
        gadget = build_gadget(c, f, k, target_indep=lab.label_count, budget=budget)
    return assemble(g, lab, gadget, mode=mode)


def instance_to_text(inst: ReducedInstance) -> str:
    """Provenance sidecar: one fact per line, fixed order, LF endings."""
    lines = [
        f"gprime {inst.gprime.n} {inst.gprime.m}",
        f"source {inst.source.n} {inst.source.m}",
        f"gadget {inst.gadget.h.n} {inst.gadget.h.m}",
        f"class {inst.gadget.class_name}",
        f"k {inst.gadget.k}",
        f"mode {inst.mode}",
        f"labels {inst.labeling.label_count}",
        f"edge-maximal {inst.gadget.edge_maximal}",
    ]
    for eid in range(inst.source.m):
        lines.append(f"phi {eid} {inst.labeling.phi[eid]}")
    for old, new in enumerate(inst.source_node_map):
        lines.append(f"map source {old} {new}")
    for old, new in enumerate(inst.gadget_node_map):
        lines.append(f"map gadget {old} {new}")
    for lab, node in enumerate(inst.w_nodes, start=1):
        lines.append(f"w {lab} {node}")
    for v in sorted(inst.gadget.indep):
        lines.append(f"indep {v}")
    witness = inst.gadget.witness_partition
    if witness is not None:
        for heid, part in enumerate(witness.assign):
            lines.append(f"witness {heid} {part}")
    for gp_eid, org in enumerate(inst.edge_origin):
        u, v = inst.gprime.edges[gp_eid]
        if org.kind == "source":
            lines.append(f"origin {u} {v} source {org.edge}")
        elif org.kind == "gadget":
            lines.append(f"origin {u} {v} gadget {org.edge}")
        else:
            lines.append(f"origin {u} {v} connector {org.edge} {org.side}")
    return "\n".join(lines) + "\n"


def instance_from_text(text: str) -> ReducedInstance:
    """Inverse of instance_to_text."""
    header: dict[str, list[str]] = {}
    phi: dict[int, int] = {}
    source_map: dict[int, int] = {}
    gadget_map: dict[int, int] = {}
    w_nodes: dict[int, int] = {}
    indep: list[int] = []
    witness_assign: dict[int, int] = {}
    origins: list[tuple[tuple[int, int], Origin]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0].startswith("#"):
            continue
        key = fields[0]
        try:
            if key in ("gprime", "source", "gadget") and len(fields) == 3:
                header[key] = fields[1:]
            elif key in ("class", "k", "mode", "labels", "edge-maximal"):
                header[key] = fields[1:]
            elif key == "phi":
                phi[int(fields[1])] = int(fields[2])
            elif key == "map" and fields[1] == "source":
                source_map[int(fields[2])] = int(fields[3])
            elif key == "map" and fields[1] == "gadget":
                gadget_map[int(fields[2])] = int(fields[3])
            elif key == "w":
                w_nodes[int(fields[1])] = int(fields[2])
            elif key == "indep":
                indep.append(int(fields[1]))
            elif key == "witness":
                witness_assign[int(fields[1])] = int(fields[2])
            elif key == "origin":
                u, v = int(fields[1]), int(fields[2])
                if fields[3] == "connector":
                    org = Origin("connector", int(fields[4]), fields[5])
                else:
                    org = Origin(fields[3], int(fields[4]))
                origins.append(((u, v), org))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise GraphError(f"line {lineno}: malformed provenance line {raw!r}") from None

    k = int(header["k"][0])
    n_source = int(header["source"][0])
    n_gadget = int(header["gadget"][0])
    label_count = int(header["labels"][0])

    src_pairs: list[tuple[int, int]] = [None] * int(header["source"][1])  # type: ignore[list-item]
    gadget_pairs: list[tuple[int, int]] = [None] * int(header["gadget"][1])  # type: ignore[list-item]
    inv_gadget = {new: old for old, new in gadget_map.items()}
    for (u, v), org in origins:
        if org.kind == "source":
            src_pairs[org.edge] = (u, v)
        elif org.kind == "gadget":
            gadget_pairs[org.edge] = (inv_gadget[u], inv_gadget[v])
    source = Graph(n_source, tuple(src_pairs))
    h = Graph(n_gadget, tuple(gadget_pairs))
    lab = Labeling(source, tuple(phi[e] for e in range(source.m)), label_count)
    witness = None
    if len(witness_assign) == h.m:
        witness = EdgePartition(h, k, tuple(witness_assign[e] for e in range(h.m)))
    gadget = GadgetGraph(
        h=h,
        k=k,
        class_name=header["class"][0],
        witness_partition=witness,
        indep=NodeSet(h, frozenset(indep)),
        edge_maximal=header["edge-maximal"][0],
    )
    origins.sort(key=lambda t: t[0])
    gprime = Graph(int(header["gprime"][0]), tuple(e for e, _ in origins))
    return ReducedInstance(
        gprime=gprime,
        source=source,
        gadget=gadget,
        labeling=lab,
        edge_origin=tuple(org for _, org in origins),
        source_node_map=tuple(source_map[i] for i in range(n_source)),
        gadget_node_map=tuple(gadget_map[i] for i in range(n_gadget)),
        w_nodes=tuple(w_nodes[l] for l in range(1, label_count + 1)),
        mode=header["mode"][0],
    )
