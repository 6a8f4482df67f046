"""Command-line front end.

Exit codes are stable across subcommands: 0 = yes/success, 1 = no,
2 = usage or parse error, 3 = budget exceeded.  Certificates go to files
(--output) rather than stdout unless --stdout is given.  The environment
variable THICKNESS_LAB_BUDGET_SECS caps wall-clock budgets globally.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import laboratory
from .classes import UnknownClassError, builtin_class_names, builtin_descriptor
from .graph import Graph, GraphError, parse_edge_list, serialize_edge_list
from .reduction import (
    GadgetIndependenceError,
    ReductionRefused,
    extract_coloring,
    instance_from_text,
    instance_to_text,
    reduce_instance,
)
from .solver import (
    Budget,
    BudgetExceededError,
    OracleSizeError,
    chromatic_index,
    edge_color_decide,
    parse_partition_text,
    thickness_decide,
    thickness_oracle,
    verify_partition,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_RECOGNIZE_ORDER = ["forest", "pseudoforest", "cactus", "eulerian", "outerplanar", "planar", "partial-2-tree"]


@dataclass
class Config:
    """Parsed command options shared by the subcommands."""

    input: Optional[Path] = None
    class_name: Optional[str] = None
    k: Optional[int] = None
    mode: str = "paper"
    budget_nodes: Optional[int] = 2_000_000
    budget_secs: Optional[float] = None
    seed: int = 7
    fmt: str = "text"
    output: Optional[Path] = None
    to_stdout: bool = False
    threads: int = 1


def _budget_from(args: argparse.Namespace) -> Budget:
    secs = args.budget_secs
    env = os.environ.get("THICKNESS_LAB_BUDGET_SECS")
    if env is not None:
        cap = float(env)
        secs = cap if secs is None else min(secs, cap)
    return Budget(max_nodes=args.budget_nodes, max_seconds=secs)


def _load_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from None
    return parse_edge_list(text)


def _write_or_print(text: str, args: argparse.Namespace, default_stdout: bool = False) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    if args.stdout or (default_stdout and not args.output):
        sys.stdout.write(text)


def cmd_recognize(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if args.all:
        for name in _RECOGNIZE_ORDER:
            f = builtin_descriptor(name)
            print(f"{name}: {'true' if f.member(g) else 'false'}")
        return EXIT_YES
    f = builtin_descriptor(args.class_name)
    verdict = f.member(g)
    print("true" if verdict else "false")
    return EXIT_YES if verdict else EXIT_NO


def cmd_thickness(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    f = builtin_descriptor(args.class_name)
    budget = _budget_from(args)
    res = thickness_decide(g, f, args.k, budget)
    if res.status == "unknown":
        print("budget-exceeded")
        return EXIT_BUDGET
    if args.oracle:
        try:
            oracle = thickness_oracle(g, f, args.k)
        except OracleSizeError as exc:
            print(f"oracle skipped: {exc}")
        else:
            if oracle.status != res.status:
                print(f"ORACLE DISAGREEMENT: solver={res.status} oracle={oracle.status}", file=sys.stderr)
                return EXIT_USAGE
            print("oracle agrees")
    if args.format == "structured":
        _write_or_print(res.to_text(), args, default_stdout=True)
    else:
        print(res.status)
        if res.certificate is not None:
            _write_or_print(res.to_text(), args)
    return EXIT_YES if res.status == "yes" else EXIT_NO


def cmd_edgecolor(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    budget = _budget_from(args)
    if args.k is not None:
        res = edge_color_decide(g, args.k, budget)
        if res.status == "unknown":
            print("budget-exceeded")
            return EXIT_BUDGET
        if args.format == "structured":
            _write_or_print(res.to_text(), args, default_stdout=True)
        else:
            print(res.status)
            if res.certificate is not None:
                _write_or_print(res.to_text(), args)
        return EXIT_YES if res.status == "yes" else EXIT_NO
    chi = chromatic_index(g, budget)
    print(chi)
    return EXIT_YES


def cmd_reduce(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    f = builtin_descriptor(args.class_name)
    budget = _budget_from(args)
    inst = reduce_instance(g, f, args.k, mode=args.mode, budget=budget)
    summary = (
        f"instance n'={inst.gprime.n} m'={inst.gprime.m} "
        f"(source {inst.source.m} + gadget {inst.gadget.h.m} + connectors {2 * inst.source.m}) "
        f"labels={inst.labeling.label_count} mode={inst.mode}"
    )
    if args.output:
        base = Path(args.output)
        graph_path = base.with_suffix(".g")
        prov_path = base.with_suffix(".prov")
        graph_path.write_text(serialize_edge_list(inst.gprime), encoding="utf-8")
        prov_path.write_text(instance_to_text(inst), encoding="utf-8")
        if args.figures:
            from .figures import save_instance_png

            save_instance_png(inst, base.with_suffix(".png"))
    if args.format == "structured":
        if args.stdout or not args.output:
            sys.stdout.write(instance_to_text(inst))
    elif args.format == "dot":
        if args.stdout or not args.output:
            sys.stdout.write(laboratory.emit_dot(inst, style="instance"))
    else:
        print(summary)
    return EXIT_YES


def cmd_verify(args: argparse.Namespace) -> int:
    if args.instance:
        inst = instance_from_text(Path(args.instance).read_text(encoding="utf-8"))
        host = inst.gprime
        k = args.k if args.k is not None else inst.gadget.k
        class_name = args.class_name or inst.gadget.class_name
    else:
        if not args.graph:
            raise GraphError("verify needs --instance or a graph argument")
        inst = None
        host = _load_graph(args.graph)
        if args.k is None or args.class_name is None:
            raise GraphError("verify on a bare graph needs --class and --k")
        k = args.k
        class_name = args.class_name
    f = builtin_descriptor(class_name)
    partition = parse_partition_text(Path(args.partition).read_text(encoding="utf-8"), host, k)
    ok = verify_partition(host, f, partition)
    print(f"partition-verifies {'true' if ok else 'false'}")
    if inst is not None:
        outcome = extract_coloring(partition, inst)
        if outcome.ok:
            print("extraction proper-coloring")
        else:
            v, e1, e2 = outcome.violation
            a, b = inst.source.edges[e1]
            c, d = inst.source.edges[e2]
            print(f"extraction failed length-2-path node={v} edges=({a},{b})+({c},{d})")
    return EXIT_YES if ok else EXIT_NO


def cmd_campaign(args: argparse.Namespace) -> int:
    budget = _budget_from(args)
    name = args.name
    if name == "observation":
        report = laboratory.campaign_observation(args.z, args.class_name or "outerplanar", args.size, budget)
    elif name == "conditions":
        report = laboratory.campaign_conditions(seed=args.seed)
    elif name == "forward":
        report = laboratory.campaign_reduction_forward(class_name=args.class_name or "outerplanar", k=args.k or 3)
    elif name == "claims":
        report = laboratory.campaign_claims_micro()
    else:
        raise GraphError(f"unknown campaign {name!r}; available: observation, conditions, forward, claims")
    if args.outdir:
        report.write(args.outdir, figures=args.figures)
    if args.format == "structured":
        sys.stdout.write(report.to_tsv())
    else:
        sys.stdout.write(report.to_text())
    return EXIT_YES if report.passed else EXIT_NO


def _add_common(p: argparse.ArgumentParser, *, with_output: bool = True) -> None:
    p.add_argument("--budget-nodes", type=int, default=2_000_000, help="node-expansion cap (default 2e6)")
    p.add_argument("--budget-secs", type=float, default=None, help="wall-clock cap in seconds")
    p.add_argument("--seed", type=int, default=7, help="campaign sampling seed")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; the solver is single-threaded and deterministic")
    if with_output:
        p.add_argument("--output", type=str, default=None, help="write certificate/instance files here")
        p.add_argument("--stdout", action="store_true", help="print machine output to stdout as well")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thickness-lab",
                                     description="Exact F-thickness laboratory: recognizers, solvers, reduction, campaigns")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="test membership of a graph in a named class")
    p.add_argument("--class", dest="class_name", default=None, help="class name (see --all for the list)")
    p.add_argument("--all", action="store_true", help="print every builtin class verdict")
    p.add_argument("--format", choices=["text"], default="text")
    p.add_argument("graph", help="edge-list file")
    _add_common(p, with_output=False)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("thickness", help="decide F-thickness <= k exactly")
    p.add_argument("--class", dest="class_name", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="cross-check against the exhaustive oracle")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(func=cmd_thickness)

    p = sub.add_parser("edgecolor", help="decide proper k-edge-colorability (or compute the chromatic index)")
    p.add_argument("--k", type=int, default=None, help="omit to compute the chromatic index")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(func=cmd_edgecolor)

    p = sub.add_parser("reduce", help="build the reduction instance G' from a k-regular graph")
    p.add_argument("--class", dest="class_name", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["paper", "relaxed"], default="paper")
    p.add_argument("--format", choices=["text", "structured", "dot"], default="text")
    p.add_argument("--figures", action="store_true", help="also render the instance to PNG")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="verify a partition file against an instance or bare graph")
    p.add_argument("--class", dest="class_name", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--instance", type=str, default=None, help="provenance file from reduce")
    p.add_argument("--partition", type=str, required=True, help="file of 'edge u v -> part' lines")
    p.add_argument("--format", choices=["text"], default="text")
    p.add_argument("graph", nargs="?", default=None, help="edge-list file (when no --instance)")
    _add_common(p, with_output=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("campaign", help="run a named verification campaign")
    p.add_argument("name", choices=["observation", "conditions", "forward", "claims"])
    p.add_argument("--class", dest="class_name", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--z", type=int, default=1, help="gadget thickness for the observation campaign")
    p.add_argument("--size", type=int, default=None, help="override the gadget node count")
    p.add_argument("--outdir", type=str, default=None, help="write report.txt/.tsv, figures, counterexamples here")
    p.add_argument("--figures", action="store_true", help="render inventory graphs to PNG under --outdir")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    _add_common(p, with_output=False)
    p.set_defaults(func=cmd_campaign)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "recognize" and not args.all and not args.class_name:
        parser.error("recognize needs --class NAME or --all")
    try:
        return args.func(args)
    except UnknownClassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, ReductionRefused, GadgetIndependenceError, OracleSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"budget-exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
