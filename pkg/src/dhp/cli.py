"""Command-line front end.

One executable, five subcommands: ``check`` (property verdicts), ``solve``
(cycle search and the structured solvers), ``construct`` (generators),
``random`` (seeded sweeps), and ``fmt`` (canonicalize a graph file).

Conventions shared by every subcommand:

* graphs are read from --input (default stdin) in edge-list or JSON format,
  always auto-detected; --format chooses the encoding wherever a graph is
  written back out, so ``fmt`` and ``construct`` can convert between the
  two;

* every run echoes its fully resolved configuration: JSON reports carry a
  "config" key, graph and CSV outputs start with a ``# config: ...``
  comment line that downstream parsers ignore, so pipelines compose;

* exit codes: 0 = holds or witness found, 1 = fails or no witness,
  2 = bad input, bad flags, or violated precondition, 3 = budget exceeded;

* outputs are deterministic: identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .budget import NODE_BUDGET_DEFAULT, SUBSET_BUDGET_DEFAULT
from .checkers import (
    check_degree_bound,
    check_dhp,
    check_critical,
    check_saturated_critical,
    check_snp,
    check_snp_minimal,
    check_supercyclic,
)
from .constructions import (
    builtin_biplane,
    bipartite_product,
    design_to_bigraph,
    design_violation,
    growth_report,
    import_design,
    iterated_product,
    pair_gadget,
    verify_design,
)
from .core import Bigraph, VertexSet
from .cycles import (
    find_cycle_covering,
    find_disjoint_cycle_cover,
    solve_degree_split,
    solve_high_degree,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    ConstructionError,
    ContractViolationError,
    DesignImportError,
    DhpError,
    DomainError,
    GraphInputError,
    ParseError,
    ResourceLimitError,
    WitnessError,
)
from .formats import load_bigraph, serialize_bigraph, bigraph_to_json_obj
from .randlab import SweepConfig, check_hamiltonian, run_sweep

INPUT_ERRORS = (
    ParseError,
    GraphInputError,
    DomainError,
    ConfigError,
    ConstructionError,
    DesignImportError,
    WitnessError,
    ResourceLimitError,
)

CHECKABLE = (
    "dhp",
    "snp",
    "supercyclic",
    "critical",
    "saturated-critical",
    "snp-minimal",
    "design",
    "degree-bound",
)

SOLVE_MODES = (
    "cover-cycle",
    "cycle-cover",
    "degree-split",
    "high-degree",
    "hamiltonian",
)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}")


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc.strerror}")


def _config_of(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["command"] = args.func.__name__.removeprefix("cmd_")
    return cfg


def _dump_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _emit_graph(args: argparse.Namespace, g: Bigraph) -> int:
    cfg = _config_of(args)
    fmt = args.format if args.format != "auto" else "edge-list"
    if fmt == "json":
        obj = bigraph_to_json_obj(g)
        obj["config"] = cfg
        _write_text(args.output, _dump_json(obj))
    else:
        header = "# config: " + json.dumps(cfg, sort_keys=True) + "\n"
        _write_text(args.output, header + serialize_bigraph(g))
    return 0


def _load_graph(args: argparse.Namespace, path: str | None = None) -> Bigraph:
    text = _read_text(path if path is not None else args.input)
    return load_bigraph(text, strict=args.strict)


def _parse_xs(spec: str, g: Bigraph) -> VertexSet:
    if spec == "all":
        return g.full_x()
    try:
        idx = [int(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError:
        raise DomainError(f"--xs expects 'all' or comma-separated indices, got {spec!r}")
    if not idx:
        raise DomainError("--xs names no vertices")
    return VertexSet.xs(idx)


# -- subcommands ---------------------------------------------------------------


def cmd_check(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    cfg = _config_of(args)
    prop = args.property
    try:
        if prop == "design":
            spec = verify_design(g)
            if spec is None:
                verdict_obj = {
                    "property": "design",
                    "holds": False,
                    "witness": {"violation": design_violation(g)},
                    "budget_exhausted": False,
                }
            else:
                verdict_obj = {
                    "property": "design",
                    "holds": True,
                    "witness": {"v": spec.v, "k": spec.k, "lambda": spec.lam},
                    "budget_exhausted": False,
                }
        elif prop == "degree-bound":
            report = check_degree_bound(g)
            verdict_obj = {
                "property": "degree-bound",
                "holds": report.within_bound,
                "witness": report.to_json_obj(),
                "budget_exhausted": False,
            }
        else:
            subsets = args.budget_subsets
            nodes = args.budget_nodes
            if prop == "dhp":
                v = check_dhp(g, budget=subsets)
            elif prop == "snp":
                v = check_snp(g, budget=subsets)
            elif prop == "supercyclic":
                v = check_supercyclic(
                    g, budget_subsets=subsets, budget_nodes=nodes
                )
            elif prop == "critical":
                v = check_critical(
                    g, budget_subsets=subsets, budget_nodes=nodes
                )
            elif prop == "saturated-critical":
                v = check_saturated_critical(
                    g, budget_subsets=subsets, budget_nodes=nodes
                )
            else:
                v = check_snp_minimal(g, budget=subsets)
            verdict_obj = v.to_json_obj()
    except BudgetExceededError as exc:
        out = {
            "config": cfg,
            "property": prop,
            "holds": None,
            "witness": None,
            "budget_exhausted": True,
            "message": str(exc),
        }
        _write_text(args.output, _dump_json(out))
        return 3
    out = {"config": cfg}
    out.update(verdict_obj)
    _write_text(args.output, _dump_json(out))
    return 0 if out["holds"] else 1


def cmd_solve(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    cfg = _config_of(args)
    diagnostics: dict = {}
    try:
        if args.mode == "cover-cycle":
            xs = _parse_xs(args.xs, g)
            cyc = find_cycle_covering(
                g, xs, exact_x=not args.superset, budget=args.budget_nodes
            )
            witness = None if cyc is None else cyc.to_json_obj()
        elif args.mode == "cycle-cover":
            cycles = find_disjoint_cycle_cover(g, budget=args.budget_nodes)
            witness = (
                None
                if cycles is None
                else {"cycles": [c.to_json_obj()["cycle"] for c in cycles]}
            )
        elif args.mode == "degree-split":
            cyc = solve_degree_split(
                g,
                exact_paths=False if args.greedy_paths else None,
                budget=args.budget_nodes,
                diagnostics=diagnostics,
            )
            witness = None if cyc is None else cyc.to_json_obj()
        elif args.mode == "high-degree":
            if args.k is None:
                raise DomainError("solve high-degree requires --k")
            cyc = solve_high_degree(
                g, args.k, budget=args.budget_nodes, diagnostics=diagnostics
            )
            witness = None if cyc is None else cyc.to_json_obj()
        else:
            cyc = check_hamiltonian(
                g, limit=args.limit, budget=args.budget_nodes
            )
            witness = None if cyc is None else cyc.to_json_obj()
    except BudgetExceededError as exc:
        out = {
            "config": cfg,
            "result": None,
            "witness": None,
            "budget_exhausted": True,
            "message": str(exc),
        }
        _write_text(args.output, _dump_json(out))
        return 3
    out = {
        "config": cfg,
        "result": "found" if witness is not None else "none",
        "witness": witness,
        "budget_exhausted": False,
    }
    if diagnostics:
        out["diagnostics"] = diagnostics
    _write_text(args.output, _dump_json(out))
    return 0 if witness is not None else 1


def cmd_construct(args: argparse.Namespace) -> int:
    if args.generator == "pair-gadget":
        g = pair_gadget(args.n)
    elif args.generator == "biplane":
        if (args.order is None) == (args.import_file is None):
            raise DomainError(
                "construct biplane needs exactly one of --order or --import"
            )
        if args.order is not None:
            g = builtin_biplane(args.order)
        else:
            g = design_to_bigraph(import_design(_read_text(args.import_file)))
    elif args.generator == "product":
        a = _load_graph(args, args.left)
        b = _load_graph(args, args.right)
        g = bipartite_product(a, b)
    else:  # power
        base = _load_graph(args, args.graph)
        g = iterated_product(base, args.k)
        report = growth_report(g)
        print(
            "# growth: " + json.dumps(report, sort_keys=True),
            file=sys.stderr,
        )
    return _emit_graph(args, g)


def cmd_random(args: argparse.Namespace) -> int:
    config = SweepConfig(
        n_list=tuple(args.n_list),
        c_list=tuple(args.c_list),
        trials=args.trials,
        master_seed=args.seed,
        measures=tuple(args.measure.split(",")),
        jobs=args.jobs,
        crn=not args.no_crn,
    )
    report = run_sweep(config)
    out_path = args.out if args.out is not None else args.output
    if out_path.endswith(".json") or args.report_format == "json":
        rep_obj = report.to_json_obj(include_records=args.records)
        payload = {
            "config": _config_of(args),
            "sweep_config": rep_obj["config"],
            "cells": rep_obj["cells"],
        }
        _write_text(out_path, _dump_json(payload))
    else:
        header = (
            "# config: " + json.dumps(_config_of(args), sort_keys=True) + "\n"
        )
        _write_text(out_path, header + report.to_csv())
    return 0


def cmd_fmt(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    return _emit_graph(args, g)


# -- parser --------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-i", "--input", default="-", help="input file (default stdin)"
    )
    common.add_argument(
        "-o", "--output", default="-", help="output file (default stdout)"
    )
    common.add_argument(
        "--format",
        choices=("auto", "edge-list", "json"),
        default="auto",
        help="encoding for graph output (default edge-list); "
        "input format is always auto-detected",
    )
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument(
        "--budget-subsets",
        type=int,
        default=SUBSET_BUDGET_DEFAULT,
        help="cap on subsets visited by property checkers",
    )
    common.add_argument(
        "--budget-nodes",
        type=int,
        default=NODE_BUDGET_DEFAULT,
        help="cap on search nodes visited by solvers",
    )
    common.add_argument(
        "--jobs", type=int, default=1, help="worker processes for sweeps"
    )
    common.add_argument(
        "--strict",
        action="store_true",
        help="reject duplicate edges when parsing edge lists",
    )

    parser = argparse.ArgumentParser(
        prog="dhp",
        description="Bipartite double-Hall toolkit: checkers, cycle solvers, "
        "constructions, and random experiments.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_check = sub.add_parser(
        "check", parents=[common], help="decide a property and print a verdict"
    )
    p_check.add_argument("property", choices=CHECKABLE)
    p_check.set_defaults(func=cmd_check)

    p_solve = sub.add_parser(
        "solve", parents=[common], help="search for a covering cycle witness"
    )
    p_solve.add_argument("mode", choices=SOLVE_MODES)
    p_solve.add_argument(
        "--xs",
        default="all",
        help="cover-cycle target X-set: 'all' or comma-separated indices",
    )
    p_solve.add_argument(
        "--superset",
        action="store_true",
        help="cover-cycle: allow extra X-vertices on the cycle",
    )
    p_solve.add_argument("--k", type=int, default=None, help="high-degree: the degree split point")
    p_solve.add_argument(
        "--greedy-paths",
        action="store_true",
        help="degree-split: skip exact path minimisation",
    )
    p_solve.add_argument(
        "--limit", type=int, default=16, help="hamiltonian: exact search size cap"
    )
    p_solve.set_defaults(func=cmd_solve)

    p_con = sub.add_parser(
        "construct", parents=[common], help="generate a structured graph"
    )
    con_sub = p_con.add_subparsers(dest="generator", required=True)
    pg = con_sub.add_parser("pair-gadget", parents=[common])
    pg.add_argument("--n", type=int, required=True)
    pg.set_defaults(func=cmd_construct)
    bp = con_sub.add_parser("biplane", parents=[common])
    bp.add_argument("--order", type=int, default=None)
    bp.add_argument("--import", dest="import_file", default=None, metavar="FILE")
    bp.set_defaults(func=cmd_construct)
    pr = con_sub.add_parser("product", parents=[common])
    pr.add_argument("left")
    pr.add_argument("right")
    pr.set_defaults(func=cmd_construct)
    pw = con_sub.add_parser("power", parents=[common])
    pw.add_argument("graph")
    pw.add_argument("--k", type=int, required=True)
    pw.set_defaults(func=cmd_construct)

    p_rand = sub.add_parser(
        "random", parents=[common], help="seeded random-graph experiments"
    )
    rand_sub = p_rand.add_subparsers(dest="experiment", required=True)
    sw = rand_sub.add_parser("sweep", parents=[common])
    sw.add_argument(
        "--n-list", type=int, nargs="+", required=True, metavar="N"
    )
    sw.add_argument(
        "--c-list", type=float, nargs="+", required=True, metavar="C"
    )
    sw.add_argument("--trials", type=int, required=True)
    sw.add_argument(
        "--measure",
        default="pair,obstacle3,maxdeg",
        help="comma-separated: pair,obstacle3,exact,hamiltonian,maxdeg",
    )
    sw.add_argument(
        "--out",
        default=None,
        help="report path; .json extension selects JSON, otherwise CSV",
    )
    sw.add_argument(
        "--report-format",
        choices=("csv", "json"),
        default="csv",
        help="report format when --out does not decide",
    )
    sw.add_argument(
        "--records",
        action="store_true",
        help="include per-trial records in JSON reports",
    )
    sw.add_argument(
        "--no-crn",
        action="store_true",
        help="derive independent seeds per c instead of common random numbers",
    )
    sw.set_defaults(func=cmd_random)

    p_fmt = sub.add_parser(
        "fmt", parents=[common], help="parse and canonically reserialize a graph"
    )
    p_fmt.set_defaults(func=cmd_fmt)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ContractViolationError as exc:
        print(f"internal contract violated: {exc}", file=sys.stderr)
        return 2
    except DhpError as exc:  # catch-all for library errors
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
