"""Batch front end: ``pcrp solve | maxrpsp | gen | verify | stats``.

Reports go to standard output as ``key value`` lines, or as one JSON object
with ``--json``.  Nothing in a report depends on the clock or on file
locations unless ``--timing`` is asked for, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from collections import Counter
from collections.abc import Sequence
from pathlib import Path

import networkx as nx

from .cover import exact_minpcrp, greedy_minpcrp, min_chain_cover, solve_1pcrp, solve_2pcrp
from .errors import CycleDetected, PathBudgetExceeded, PcrpError, ValidationError
from .generate import random_dag, random_pairs
from .graph import Dag, collapse_sccs
from .instance import (
    PcrpInstance,
    RequiredPair,
    max_overlap_degree,
    parse_raw,
    parse_solution,
    verify_solution,
    write_instance,
    write_solution,
)
from .maxrpsp import max_rpsp_bruteforce, max_rpsp_dp
from .reductions import gen_3pcrp, gen_krpsp, krpsp_layout

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2

Report = dict[str, object]


# ------------------------------------------------------------------ helpers


def load_instance(path: str) -> tuple[PcrpInstance, tuple[int, ...] | None]:
    """Read an instance, contracting strongly connected components if it has cycles.

    Returns the instance and, for cyclic input, the map from original to
    collapsed vertex ids.  Pairs falling inside one component are dropped:
    any path entering the component can visit both ends.
    """
    raw = parse_raw(Path(path).read_text(encoding="utf-8"))
    for a, b in raw.pairs:
        if a == b:
            raise ValidationError(f"self-pair ({a},{b})")
    cyclic = any(u == v for u, v in raw.arcs)
    if not cyclic:
        dag = Dag(raw.n, raw.arcs, raw.source, raw.sink)
        try:
            dag.topo
        except CycleDetected:
            cyclic = True
    if cyclic:
        dag, vertex_map = collapse_sccs(raw.n, raw.arcs, raw.source, raw.sink)
        pairs = {
            (vertex_map[a], vertex_map[b])
            for a, b in raw.pairs
            if vertex_map[a] != vertex_map[b]
        }
        return PcrpInstance(dag, tuple(RequiredPair(*p) for p in sorted(pairs))), vertex_map
    return PcrpInstance(dag, tuple(RequiredPair(*p) for p in raw.pairs)), None


def _emit(report: Report, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report) + "\n")
        return
    lines = []
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], (list, tuple)):
            lines += [f"{key} {' '.join(map(str, item))}" for item in value]
        elif isinstance(value, (list, tuple)):
            lines.append(f"{key} {' '.join(map(str, value))}".rstrip())
        elif isinstance(value, bool):
            lines.append(f"{key} {'yes' if value else 'no'}")
        else:
            lines.append(f"{key} {value}")
    sys.stdout.write("\n".join(lines) + "\n")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _collapse_note(report: Report, vertex_map: tuple[int, ...] | None) -> None:
    if vertex_map is not None:
        report["collapsed"] = True
        report["vertex_map"] = list(vertex_map)


# ----------------------------------------------------------------- commands


def cmd_solve(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    inst, vertex_map = load_instance(args.instance)
    report: Report = {"command": "solve"}
    _collapse_note(report, vertex_map)
    if inst.uncoverable:
        a, b = inst.uncoverable[0]
        report["status"] = "infeasible"
        report["reason"] = f"uncoverable pair ({a},{b})"
        _emit(report, args.json)
        return EXIT_NEGATIVE
    lower = len(min_chain_cover(range(inst.n), inst.reach))
    paths: list = []
    stage = ""
    optimal = False
    single = solve_1pcrp(inst)
    if single is not None:
        paths, stage, optimal = [single], "1pcrp", True
    if not paths:
        pair = solve_2pcrp(inst)
        if pair is not None:
            paths, stage, optimal = list(pair), "2pcrp", True
    if not paths and args.exact:
        if args.method == "paths":
            try:
                found = exact_minpcrp(inst, k_max=args.kmax, budget=args.budget, method="paths")
            except PathBudgetExceeded:
                log.info("st-path budget exceeded, switching to chain search")
                found = exact_minpcrp(inst, k_max=args.kmax, method="chains")
        else:
            found = exact_minpcrp(inst, k_max=args.kmax, method="chains")
        if found is not None:
            paths, stage, optimal = found, "exact", True
        else:
            report["exact"] = f"no cover with k <= {args.kmax}"
    if not paths:
        paths, stage = greedy_minpcrp(inst), "greedy"
        optimal = len(paths) == lower
    check = verify_solution(inst, paths)
    assert check.valid, "solver returned an invalid cover"
    report.update(
        status="feasible",
        stage=stage,
        k=len(paths),
        lower_bound=lower,
        optimal=optimal,
    )
    if args.timing:
        report["seconds"] = f"{time.perf_counter() - start:.3f}"
    if args.output:
        _write(args.output, write_solution(paths))
    else:
        report["path"] = [list(p) for p in paths]
    _emit(report, args.json)
    return EXIT_OK


def cmd_maxrpsp(args: argparse.Namespace) -> int:
    inst, vertex_map = load_instance(args.instance)
    report: Report = {"command": "maxrpsp"}
    _collapse_note(report, vertex_map)
    dropped = len(inst.uncoverable)
    if args.brute:
        result = max_rpsp_bruteforce(inst, budget=args.budget)
        report["method"] = "brute"
    else:
        result = max_rpsp_dp(inst)
        report["method"] = "dp"
    report.update(
        optimum=result.count,
        pairs=len(inst.pairs) - dropped,
        dropped=dropped,
        p=result.p,
        states=result.state_count,
    )
    if args.emit_witness:
        report["witness"] = list(result.path)
        report["covered"] = [list(p) for p in result.covered]
    _emit(report, args.json)
    return EXIT_OK


def _read_graph(args: argparse.Namespace) -> nx.Graph:
    if args.graph:
        return nx.read_adjlist(args.graph, nodetype=int)
    if args.gnp:
        n, p = int(args.gnp[0]), float(args.gnp[1])
        return nx.gnp_random_graph(n, p, seed=args.seed)
    raise PcrpError("give --graph FILE or --gnp N P")


def cmd_gen(args: argparse.Namespace) -> int:
    report: Report = {"command": "gen", "kind": args.kind, "seed": args.seed}
    sidecar: dict | None = None
    if args.kind == "random":
        rng = random.Random(args.seed)
        dag = random_dag(args.n, args.density, rng)
        pairs = random_pairs(dag, args.pairs, rng, max_degree=args.degree)
        inst = PcrpInstance(dag, tuple(pairs))
    elif args.kind == "from-3col":
        g = _read_graph(args)
        inst, layout = gen_3pcrp(g)
        sidecar = layout.to_json()
    else:
        g = _read_graph(args)
        inst = gen_krpsp(g, args.h)
        sidecar = krpsp_layout(g, args.h)
    _write(args.output, write_instance(inst))
    if sidecar is not None and args.output and args.output != "-":
        map_path = args.map or f"{args.output}.map.json"
        Path(map_path).write_text(json.dumps(sidecar, indent=1) + "\n", encoding="utf-8")
        report["map"] = Path(map_path).name
    report.update(n=inst.n, arcs=len(inst.dag.arcs), pairs=len(inst.pairs))
    if args.output and args.output != "-":
        _emit(report, args.json)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst, vertex_map = load_instance(args.instance)
    paths = parse_solution(Path(args.solution).read_text(encoding="utf-8"))
    result = verify_solution(inst, paths, args.mode)
    report: Report = {"command": "verify", "mode": args.mode}
    _collapse_note(report, vertex_map)
    report.update(
        valid=result.valid,
        k=result.k,
        uncovered_vertices=list(result.uncovered_vertices),
        uncovered_pairs=[list(p) for p in result.uncovered_pairs],
    )
    _emit(report, args.json)
    return EXIT_OK if result.valid else EXIT_NEGATIVE


def cmd_stats(args: argparse.Namespace) -> int:
    inst, vertex_map = load_instance(args.instance)
    report: Report = {"command": "stats"}
    _collapse_note(report, vertex_map)
    usable = inst.coverable_only() if inst.uncoverable else inst
    degrees = Counter(m.bit_count() for m in usable.overlap_masks)
    overlapping = sum(m.bit_count() for m in usable.overlap_masks) // 2
    nested = sum(m.bit_count() for m in usable.nested_masks)
    report.update(
        n=inst.n,
        arcs=len(inst.dag.arcs),
        pairs=len(inst.pairs),
        uncoverable=len(inst.uncoverable),
        p=max_overlap_degree(usable),
        degree_histogram=[f"{d}:{degrees[d]}" for d in sorted(degrees)],
        nested=nested,
        alternated=overlapping - nested,
    )
    _emit(report, args.json)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--json", action="store_true", help="print one JSON object")
    common.add_argument("--budget", type=int, default=10**5, help="st-path enumeration cap")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(prog="pcrp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="cover all vertices and pairs")
    solve.add_argument("instance")
    solve.add_argument("-o", "--output", help="write the solution file here")
    solve.add_argument("--exact", action="store_true", help="run the exhaustive search before greedy")
    solve.add_argument("--kmax", type=int, default=6, help="largest k tried by --exact")
    solve.add_argument(
        "--method",
        choices=("chains", "paths"),
        default="chains",
        help="--exact search space: vertex chains, or enumerated st-paths capped by --budget",
    )
    solve.add_argument("--timing", action="store_true", help="add wall time to the report")
    solve.set_defaults(func=cmd_solve)

    maxr = sub.add_parser("maxrpsp", parents=[common], help="one path covering the most pairs")
    maxr.add_argument("instance")
    maxr.add_argument("--emit-witness", action="store_true", help="print the optimal path")
    maxr.add_argument("--brute", action="store_true", help="enumerate st-paths instead of the DP")
    maxr.set_defaults(func=cmd_maxrpsp)

    gen = sub.add_parser("gen", parents=[common], help="generate an instance")
    gen.add_argument("kind", choices=["random", "from-3col", "from-clique"])
    gen.add_argument("-o", "--output", help="instance file (default: stdout)")
    gen.add_argument("--map", help="sidecar mapping file (default: OUTPUT.map.json)")
    gen.add_argument("--n", type=int, default=12, help="vertices for random DAGs")
    gen.add_argument("--density", type=float, default=0.3, help="arc probability for random DAGs")
    gen.add_argument("--pairs", type=int, default=6, help="required pairs for random instances")
    gen.add_argument("--degree", type=int, help="cap on the overlapping degree")
    gen.add_argument("--graph", help="undirected graph as an adjacency list file")
    gen.add_argument("--gnp", nargs=2, metavar=("N", "P"), help="seeded G(n, p) graph")
    gen.add_argument("--h", type=int, default=3, help="clique size for from-clique")
    gen.set_defaults(func=cmd_gen)

    ver = sub.add_parser("verify", parents=[common], help="check a solution file")
    ver.add_argument("instance")
    ver.add_argument("solution")
    ver.add_argument("--mode", choices=["cover-all", "pairs-only"], default="cover-all")
    ver.set_defaults(func=cmd_verify)

    stats = sub.add_parser("stats", parents=[common], help="instance summary")
    stats.add_argument("instance")
    stats.set_defaults(func=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (PcrpError, OSError, ValueError) as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
