"""Command line: one subcommand per verification, text or JSON reports, exit status 0/1/2."""
import argparse
import json
import logging
import sys
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from src import config
from src.envelope import duflo_density, exp_identity_defect, star
from src.envelope.expseries import monomials_up_to
from src.errors import BudgetCap, UnknownAlgebra, WorkbenchError
from src.freelie import bch_series
from src.graph.kv_graph import run_kv_pipeline
from src.graphs import AdmissibleGraph, canonical_classes, enumerate_graphs, parse_graph
from src.kv import save_pair
from src.liealg import LieAlgebra, SymPoly, load_lie_algebra, parse_polynomial
from src.models import CommandReport, KVPipelineState, RunConfig
from src.types import MAX_GRAPH_ORDER, MAX_WHEEL_SPOKES, REPORT_SCHEMA, Command, OutputFormat, WheelIntegrand
from src.weights import graph_star, mc_weight, star_to_order, wheel_weight_check

logger = logging.getLogger(__name__)


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _algebra(cfg: RunConfig) -> LieAlgebra:
    if cfg.lie is None:
        raise UnknownAlgebra(f"{cfg.command.value} needs --lie builtin:NAME or a JSON file")
    return load_lie_algebra(cfg.lie)


# Algebra and star product -----------------------------------------------


def cmd_bch(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    z = bch_series(cfg.order)
    return CommandReport(command=cfg.command, ok=True, lines=[z.to_text()], data={"series": z.to_text()})


def cmd_star(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    g = _algebra(cfg)
    f1, f2 = parse_polynomial(args.f1, g.dim), parse_polynomial(args.f2, g.dim)
    value = star(g, f1, f2)
    return CommandReport(
        command=cfg.command,
        ok=True,
        lines=[value.to_text()],
        data={"lie": g.label, "f1": f1.to_text(), "f2": f2.to_text(), "product": value.to_text()},
    )


def cmd_assoc(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    g = _algebra(cfg)
    monomials = [SymPoly.monomial(e) for e in monomials_up_to(g.dim, args.max_degree)]
    failures = []
    triples = 0
    for a, b, c in product(monomials, repeat=3):
        if a.degree() + b.degree() + c.degree() > args.max_degree:
            continue
        triples += 1
        defect = star(g, star(g, a, b), c) - star(g, a, star(g, b, c))
        if not defect.is_zero():
            failures.append({"triple": [a.to_text(), b.to_text(), c.to_text()], "defect": defect.to_text()})
    ok = not failures
    lines = [f"{_verdict(ok)} ({triples} triples)"]
    lines += ["  ({}): {}".format(", ".join(f["triple"]), f["defect"]) for f in failures[:10]]
    return CommandReport(
        command=cfg.command,
        ok=ok,
        lines=lines,
        data={"lie": g.label, "max_degree": args.max_degree, "triples": triples, "failures": failures},
    )


def cmd_expcheck(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    g = _algebra(cfg)
    d = g.dim
    defect = exp_identity_defect(g, cfg.order)
    density = duflo_density(g, cfg.order).poly
    d_part = SymPoly(2 * d, {e[d:]: c for e, c in density.terms.items() if not any(e[:d])})
    names = [f"u{i}" for i in range(d)] + [f"v{i}" for i in range(d)]
    ok = defect.is_zero()
    text = f"PASS, D = {d_part.to_text(names)}" if ok else f"FAIL, defect = {defect.poly.to_text()}"
    return CommandReport(
        command=cfg.command,
        ok=ok,
        lines=[text],
        data={"lie": g.label, "order": cfg.order, "density": d_part.to_text(names), "defect": defect.poly.to_text()},
    )


# Graph weights -----------------------------------------------------------


def cmd_weights(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    if args.graph:
        graphs = [parse_graph(args.graph)]
    elif args.family is not None:
        if args.family > MAX_GRAPH_ORDER:
            raise BudgetCap(f"weights are integrated for at most {MAX_GRAPH_ORDER} aerial vertices")
        graphs = [AdmissibleGraph(args.family, 2, key) for key in sorted(canonical_classes(enumerate_graphs(args.family, 2)))]
    else:
        raise UnknownAlgebra("weights needs --graph TEXT or --family N")
    if any(graph.n > MAX_GRAPH_ORDER for graph in graphs):
        raise BudgetCap(f"weights are integrated for at most {MAX_GRAPH_ORDER} aerial vertices")
    estimates = []
    for index, graph in enumerate(graphs):
        seed = cfg.seed if len(graphs) == 1 else [cfg.seed, index]
        estimates.append(mc_weight(graph, cfg.samples, seed, cfg.workers))
    ok = True
    if args.expect is not None:
        ok = all(e.within(args.expect, cfg.tolerance_k, floor=1e-9) for e in estimates)
    lines = [f"{e.graph}: {e.mean:.6f} +- {e.stderr:.6f} ({e.samples} samples, seed {e.seed})" for e in estimates]
    if args.expect is not None:
        lines.append(f"{_verdict(ok)} (expected {args.expect} within {cfg.tolerance_k} stderr)")
    return CommandReport(command=cfg.command, ok=ok, lines=lines, data={"estimates": [e.to_record() for e in estimates]})


def cmd_graphstar(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    if cfg.order > MAX_GRAPH_ORDER:
        raise BudgetCap(f"graph-star order {cfg.order} exceeds the cap {MAX_GRAPH_ORDER}")
    g = _algebra(cfg)
    if args.f1 is not None and args.f2 is not None:
        pairs = [(parse_polynomial(args.f1, g.dim), parse_polynomial(args.f2, g.dim))]
    else:
        variables = [SymPoly.variable(i, g.dim) for i in range(g.dim)]
        pairs = [(a, b) for a in variables for b in variables]
    graphs_by_order = {n: enumerate_graphs(n, 2, max_in_degree_aerial=1) for n in range(1, cfg.order + 1)}
    weight_cache = {}
    tables = []
    lines = []
    for f1, f2 in pairs:
        result = graph_star(
            g, f1, f2, cfg.order, cfg.samples, cfg.seed, cfg.workers,
            graphs_by_order=graphs_by_order, weight_cache=weight_cache,
        )
        rows = result.compare(star_to_order(g, f1, f2, cfg.order), cfg.tolerance_k)
        tables.append({"f1": f1.to_text(), "f2": f2.to_text(), "rows": rows})
        lines.append(f"{f1.to_text()} * {f2.to_text()}:")
        for row in rows:
            lines.append(
                f"  {row['monomial']:>12}  exact {row['exact']:>8}  estimate {row['estimate']: .6f}"
                f"  +- {row['stderr']:.6f}  {'ok' if row['ok'] else 'MISMATCH'}"
            )
    ok = all(row["ok"] for table in tables for row in table["rows"])
    lines.append(_verdict(ok))
    return CommandReport(command=cfg.command, ok=ok, lines=lines, data={"lie": g.label, "order": cfg.order, "tables": tables})


def cmd_wheels(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    if not 2 <= args.k <= MAX_WHEEL_SPOKES:
        raise BudgetCap(f"wheels have 2 to {MAX_WHEEL_SPOKES} spokes, got {args.k}")
    estimate = wheel_weight_check(args.k, cfg.samples, cfg.seed, cfg.workers)
    absolute = wheel_weight_check(args.k, cfg.samples, cfg.seed, cfg.workers, WheelIntegrand.ABSOLUTE)
    constant_spoke = wheel_weight_check(args.k, cfg.samples, cfg.seed, cfg.workers, WheelIntegrand.CONSTANT_SPOKE)
    vanishes = estimate.within(0.0, cfg.tolerance_k)
    live = absolute.mean > cfg.tolerance_k * absolute.stderr and not constant_spoke.within(0.0, cfg.tolerance_k)
    ok = vanishes and live
    lines = [
        f"wheel k={args.k}: {estimate.mean:.6f} +- {estimate.stderr:.6f}",
        f"|density|: {absolute.mean:.6f} +- {absolute.stderr:.6f}",
        f"constant spoke: {constant_spoke.mean:.6f} +- {constant_spoke.stderr:.6f}",
        _verdict(ok),
    ]
    return CommandReport(
        command=cfg.command,
        ok=ok,
        lines=lines,
        data={
            "estimate": estimate.to_record(),
            "absolute": absolute.to_record(),
            "constant_spoke": constant_spoke.to_record(),
            "vanishes": vanishes,
            "live": live,
        },
    )


# KV equations ------------------------------------------------------------


def _kv_report(cfg: RunConfig, state: KVPipelineState) -> CommandReport:
    pair = state["pair"]
    ok = not state["failed"]
    lines = [f"F = {pair.F.to_text()}", f"G = {pair.G.to_text()}"]
    for record in state["checks"]:
        residual = record["detail"].get("residual", record["detail"].get("difference", ""))
        lines.append(f"{record['name']}: {_verdict(record['passed'])} (residual {residual})")
    if state["homotopy"]:
        h = state["homotopy"]
        lines.append(f"LHS = {h['lhs']}, RHS = {h['rhs']}, diff = {h['difference']}")
    lines.append(_verdict(ok))
    return CommandReport(
        command=cfg.command,
        ok=ok,
        lines=lines,
        data={
            "pair": pair.to_record(),
            "checks": state["checks"],
            "homotopy": state["homotopy"],
            "log": state["pipeline_log"],
        },
    )


def cmd_kv(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    state = run_kv_pipeline(cfg.order)
    if args.save:
        save_pair(state["pair"], args.save)
    return _kv_report(cfg, state)


def cmd_kv2(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    _algebra(cfg)
    return _kv_report(cfg, run_kv_pipeline(cfg.order, algebras=[cfg.lie], pair_source=args.pair))


def cmd_homotopy(cfg: RunConfig, args: argparse.Namespace) -> CommandReport:
    _algebra(cfg)
    state = run_kv_pipeline(cfg.order, homotopy_lie=cfg.lie, homotopy_inputs=(args.f1, args.f2), pair_source=args.pair)
    return _kv_report(cfg, state)


COMMANDS: Dict[Command, Callable[[RunConfig, argparse.Namespace], CommandReport]] = {
    Command.BCH: cmd_bch,
    Command.STAR: cmd_star,
    Command.ASSOC: cmd_assoc,
    Command.EXPCHECK: cmd_expcheck,
    Command.WEIGHTS: cmd_weights,
    Command.GRAPHSTAR: cmd_graphstar,
    Command.WHEELS: cmd_wheels,
    Command.KV: cmd_kv,
    Command.KV2: cmd_kv2,
    Command.HOMOTOPY: cmd_homotopy,
}


# Parsing and output ------------------------------------------------------


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lie", help="builtin:NAME or path to a JSON Lie algebra")
    common.add_argument("--order", type=int, help="truncation order N")
    common.add_argument("--samples", type=int, default=config.default_samples(), help="Monte-Carlo samples per weight")
    common.add_argument("--seed", type=int, default=config.default_seed(), help="root seed")
    common.add_argument("--workers", type=int, default=config.default_workers(), help="Monte-Carlo worker processes")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    common.add_argument("--tolerance-k", dest="tolerance_k", type=int, default=config.default_tolerance_k())

    parser = argparse.ArgumentParser(prog="kvbench", description="Kontsevich star product and Kashiwara-Vergne workbench.")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(Command.BCH.value, parents=[common], help="BCH series log(e^y1 e^y2)")
    sub = commands.add_parser(Command.STAR.value, parents=[common], help="exact star product of two polynomials")
    sub.add_argument("f1")
    sub.add_argument("f2")
    sub = commands.add_parser(Command.ASSOC.value, parents=[common], help="associativity over monomial triples")
    sub.add_argument("--max-degree", dest="max_degree", type=int, default=3)
    commands.add_parser(Command.EXPCHECK.value, parents=[common], help="e^y1 * e^y2 = D e^Z")
    sub = commands.add_parser(Command.WEIGHTS.value, parents=[common], help="Monte-Carlo graph weights")
    sub.add_argument("--graph", help='graph text, e.g. "1 2 ; 0:(g0,g1)"')
    sub.add_argument("--family", type=int, help="all canonical graphs with this many aerial vertices")
    sub.add_argument("--expect", type=float, help="expected weight of every graph")
    sub = commands.add_parser(Command.GRAPHSTAR.value, parents=[common], help="graph expansion against the exact star")
    sub.add_argument("f1", nargs="?")
    sub.add_argument("f2", nargs="?")
    sub = commands.add_parser(Command.WHEELS.value, parents=[common], help="vanishing of wheel weights")
    sub.add_argument("--k", type=int, default=2, help="number of spokes")
    sub = commands.add_parser(Command.KV.value, parents=[common], help="solve the first KV equation")
    sub.add_argument("--save", help="write the pair to this JSON file")
    sub = commands.add_parser(Command.KV2.value, parents=[common], help="second KV equation on an algebra")
    sub.add_argument("--pair", help="read the pair from this JSON file")
    sub = commands.add_parser(Command.HOMOTOPY.value, parents=[common], help="homotopy formula for f1 * f2")
    sub.add_argument("f1")
    sub.add_argument("f2")
    sub.add_argument("--pair", help="read the pair from this JSON file")
    return parser.parse_args(argv)


def _run_config(args: argparse.Namespace) -> RunConfig:
    values = {
        "command": args.command,
        "lie": args.lie,
        "samples": args.samples,
        "seed": args.seed,
        "workers": args.workers,
        "tolerance_k": args.tolerance_k,
        "format": args.format,
    }
    if args.order is not None:
        values["order"] = args.order
    return RunConfig(**values)


def _emit(lines: List[str], record: dict, output_format: str) -> None:
    if output_format == OutputFormat.JSON.value:
        print(json.dumps(record, indent=2))
    else:
        print("\n".join(lines))


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=config.log_level(), format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    args = _parse_args(argv)
    try:
        cfg = _run_config(args)
        report = COMMANDS[cfg.command](cfg, args)
    except (WorkbenchError, ValidationError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        record = {"schema": REPORT_SCHEMA, "ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit([f"error: {type(exc).__name__}: {exc}"], record, args.format)
        return 2
    _emit(report.lines, report.to_record(cfg), cfg.format.value)
    return 0 if report.ok else 1
