"""Command-line entry point: ``qaoa-phaseops <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .analytic import Angles1, total_expectation
from .experiment import load_config, read_records, run_to_csv, summarize, write_summary
from .graph import encode_graph6, parse_graph6
from .maxcut import max_cut
from .optimizer import OptimizeConfig, optimize
from .simulator import AngleSchedule, qaoa_expectation
from .strategies import generate, parse_strategy


def _angles(text: str) -> list[float]:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    return [float(p) for p in parts]


def cmd_maxcut(args) -> dict:
    g = parse_graph6(args.graph6)
    res = max_cut(g)
    return {"graph6": args.graph6, "value": res.value, "partition": list(res.partition)}


def cmd_eval_p1(args) -> dict:
    g, h = parse_graph6(args.graph), parse_graph6(args.operator)
    return {"expectation": total_expectation(g, h, Angles1(args.gamma, args.beta))}


def cmd_simulate(args) -> dict:
    g, h = parse_graph6(args.graph), parse_graph6(args.operator)
    x = _angles(args.angles)
    if len(x) != 2 * args.p:
        raise SystemExit(f"--angles needs {2 * args.p} values (gammas then betas), got {len(x)}")
    return {"expectation": qaoa_expectation(g, h, AngleSchedule.from_array(x))}


def cmd_optimize(args) -> dict:
    g, h = parse_graph6(args.graph), parse_graph6(args.operator)
    cfg = OptimizeConfig(n_starts=args.starts, seed=args.seed)
    res = optimize(g, h, args.p, cfg)
    mc = max_cut(g).value
    return {
        "best_expectation": res.best_value,
        "approximation_ratio": res.best_value / mc if mc else None,
        "gammas": res.best_schedule.gammas,
        "betas": res.best_schedule.betas,
        "starts_converged": res.starts_converged,
        "evaluations": res.evaluations,
    }


def cmd_gen_ops(args) -> dict:
    g = parse_graph6(args.graph)
    spec = parse_strategy(args.strategy, max_instances=args.max, seed=args.seed)
    return {
        "strategy": spec.name,
        "instances": [
            {"index": inst.instance_index, "graph6": encode_graph6(inst.operator_graph),
             "edges": inst.operator_graph.sorted_edges()}
            for inst in generate(g, spec)
        ],
    }


def cmd_experiment(args) -> dict:
    cfg = load_config(args.config)
    if args.workers is not None:
        cfg.parallelism = args.workers
    n = run_to_csv(cfg, args.output)
    return {"records": n, "output": args.output}


def cmd_summarize(args) -> dict:
    stats = summarize(read_records(args.input))
    prefix = args.out_prefix or args.input.rsplit(".csv", 1)[0] + "_summary"
    ar_path, pb_path = write_summary(stats, prefix)
    return {
        "ar_table": str(ar_path),
        "percent_better_table": str(pb_path),
        "percent_better": {f"{k[0]}@p{k[1]}": 100.0 * v for k, v in stats.percent_better.items()},
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaoa-phaseops", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maxcut", help="exact MaxCut of a graph6 graph")
    p.add_argument("graph6")
    p.set_defaults(func=cmd_maxcut)

    p = sub.add_parser("eval-p1", help="closed-form depth-1 expectation")
    p.add_argument("--graph", required=True)
    p.add_argument("--operator", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_eval_p1)

    p = sub.add_parser("simulate", help="statevector expectation at depth p")
    p.add_argument("--graph", required=True)
    p.add_argument("--operator", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--angles", required=True, help="gammas then betas, comma separated")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimize", help="multi-start L-BFGS over the angles")
    p.add_argument("--graph", required=True)
    p.add_argument("--operator", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--starts", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("gen-ops", help="phase-operator graphs for a strategy")
    p.add_argument("--graph", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max", type=int, default=10)
    p.set_defaults(func=cmd_gen_ops)

    p = sub.add_parser("experiment", help="run a sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--output", default="records.csv")
    p.add_argument("--workers", type=int, default=None, help="override config parallelism")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("summarize", help="AR quartiles and percent-better tables from a records CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out-prefix", default=None)
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        out = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(out, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
