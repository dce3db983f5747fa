"""Batch sweeps over graph corpora, strategies and depths, plus summary statistics."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .graph import Graph, connected, encode_graph6, read_graph6_file
from .maxcut import max_cut
from .optimizer import OptimizeConfig, optimize
from .strategies import DEFAULT_STRATEGIES, StrategySpec, generate, parse_strategy

log = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-9
RECORD_COLUMNS = (
    "graph_index", "graph6", "strategy", "instance_index", "p", "maxcut", "operator_edges",
    "best_expectation", "approximation_ratio", "best_angles", "seed_used", "status",
)
FAMILIES = ("random", "sub", "tr", "mder")


@dataclass
class ExperimentConfig:
    input_path: str
    strategies: list[str] = field(default_factory=lambda: list(DEFAULT_STRATEGIES[1:]))
    depths: list[int] = field(default_factory=lambda: [1])
    optimizer: OptimizeConfig = field(default_factory=OptimizeConfig)
    master_seed: int = 0
    parallelism: int = 1
    connected_only: bool = True
    max_instances: int = 10
    # seeded subsample of the (filtered) corpus; None keeps every graph
    subsample: int | None = None
    # desk-scale preset for p >= 2: fewer graphs and fewer starts
    deep_subsample: int | None = 200
    deep_starts: int | None = 30

    def __post_init__(self):
        if not self.depths:
            raise ValueError("depths must be nonempty")
        if not self.strategies:
            raise ValueError("strategies must be nonempty")
        if any(p < 1 for p in self.depths):
            raise ValueError("depths must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        for name in self.strategies:
            parse_strategy(name)
        if isinstance(self.optimizer, dict):
            self.optimizer = _strict(OptimizeConfig, self.optimizer, "optimizer")

    @property
    def strategy_names(self) -> list[str]:
        """Normalized strategy names with the standard baseline first."""
        names = [parse_strategy(s).name for s in self.strategies]
        return ["standard"] + [s for s in dict.fromkeys(names) if s != "standard"]


def _strict(cls, data: dict, where: str):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown keys in {where}: {', '.join(unknown)}")
    return cls(**data)


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an :class:`ExperimentConfig` from JSON; unknown keys are rejected.

    A relative ``input_path`` is resolved against the config file's directory.
    """
    path = Path(path)
    data = json.loads(path.read_text())
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    cfg = _strict(ExperimentConfig, data, "config")
    inp = Path(cfg.input_path)
    if not inp.is_absolute():
        cfg.input_path = str((path.parent / inp).resolve())
    return cfg


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return asdict(cfg)


def derive_seed(master_seed: int, graph_index: int, strategy: str, instance_index: int, p: int, purpose: str = "opt") -> int:
    """Stable 64-bit seed from the task coordinates."""
    key = f"{master_seed}|{graph_index}|{strategy}|{instance_index}|{p}|{purpose}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


@dataclass
class ExperimentRecord:
    graph_index: int
    graph6: str
    strategy: str
    instance_index: int
    p: int
    maxcut: int
    operator_edges: int
    best_expectation: float
    approximation_ratio: float
    best_angles: list[float]
    seed_used: int
    status: str = "ok"

    def as_row(self) -> list[str]:
        return [
            str(self.graph_index), self.graph6, self.strategy, str(self.instance_index), str(self.p),
            str(self.maxcut), str(self.operator_edges), repr(float(self.best_expectation)),
            repr(float(self.approximation_ratio)), ";".join(repr(float(a)) for a in self.best_angles),
            str(self.seed_used), self.status,
        ]

    @classmethod
    def from_row(cls, row: dict) -> "ExperimentRecord":
        angles = row["best_angles"]
        return cls(
            graph_index=int(row["graph_index"]),
            graph6=row["graph6"],
            strategy=row["strategy"],
            instance_index=int(row["instance_index"]),
            p=int(row["p"]),
            maxcut=int(row["maxcut"]),
            operator_edges=int(row["operator_edges"]),
            best_expectation=float(row["best_expectation"]),
            approximation_ratio=float(row["approximation_ratio"]),
            best_angles=[float(a) for a in angles.split(";")] if angles else [],
            seed_used=int(row["seed_used"]),
            status=row["status"],
        )

    @property
    def ok(self) -> bool:
        return self.status == "ok"


# ---------------------------------------------------------------- selection


def select_graphs(cfg: ExperimentConfig) -> list[tuple[int, Graph]]:
    """``(graph_index, graph)`` pairs after the connectivity filter and subsampling.

    ``graph_index`` is the 0-based line position in the input file.
    """
    graphs = list(enumerate(read_graph6_file(cfg.input_path)))
    if cfg.connected_only:
        graphs = [(i, g) for i, g in graphs if connected(g)]
    if cfg.subsample is not None and cfg.subsample < len(graphs):
        rng = np.random.default_rng([cfg.master_seed, 1])
        keep = np.sort(rng.choice(len(graphs), size=cfg.subsample, replace=False))
        graphs = [graphs[i] for i in keep]
    return graphs


def _deep_indices(cfg: ExperimentConfig, selected: list[int]) -> set[int]:
    if cfg.deep_subsample is None or cfg.deep_subsample >= len(selected):
        return set(selected)
    rng = np.random.default_rng([cfg.master_seed, 2])
    keep = rng.choice(len(selected), size=cfg.deep_subsample, replace=False)
    return {selected[i] for i in keep}


# ---------------------------------------------------------------- execution


@dataclass
class _GraphTask:
    graph_index: int
    graph: Graph
    strategies: list[str]
    depths: list[int]
    optimizer: OptimizeConfig
    deep_starts: int | None
    master_seed: int
    max_instances: int


def _run_graph(task: _GraphTask) -> list[ExperimentRecord]:
    g, gi = task.graph, task.graph_index
    g6 = encode_graph6(g)
    mc = max_cut(g).value
    records = []
    for name in task.strategies:
        gen_seed = derive_seed(task.master_seed, gi, name, 0, 0, purpose="generate")
        spec = parse_strategy(name, max_instances=task.max_instances, seed=gen_seed)
        try:
            instances = generate(g, spec)
        except Exception as exc:  # recorded, the run continues
            log.warning("graph %d strategy %s: generation failed: %s", gi, name, exc)
            for p in task.depths:
                records.append(_error_record(gi, g6, name, -1, p, mc, 0, gen_seed, exc))
            continue
        for p in task.depths:
            for inst in instances:
                seed = derive_seed(task.master_seed, gi, name, inst.instance_index, p)
                opt_cfg = OptimizeConfig(**{**asdict(task.optimizer), "seed": seed})
                if p >= 2 and task.deep_starts is not None:
                    opt_cfg.n_starts = task.deep_starts
                n_ops = len(inst.operator_graph.edges)
                try:
                    res = optimize(g, inst.operator_graph, p, opt_cfg)
                    ratio = res.best_value / mc if mc else float("nan")
                    if not math.isfinite(res.best_value):
                        raise FloatingPointError("non-finite expectation")
                    records.append(ExperimentRecord(
                        gi, g6, name, inst.instance_index, p, mc, n_ops, res.best_value, ratio,
                        res.best_schedule.as_array().tolist(), seed,
                    ))
                except Exception as exc:
                    log.warning("graph %d %s #%d p=%d failed: %s", gi, name, inst.instance_index, p, exc)
                    records.append(_error_record(gi, g6, name, inst.instance_index, p, mc, n_ops, seed, exc))
    return records


def _error_record(gi, g6, name, idx, p, mc, n_ops, seed, exc) -> ExperimentRecord:
    msg = f"error: {type(exc).__name__}: {exc}".replace("\n", " ")
    return ExperimentRecord(gi, g6, name, idx, p, mc, n_ops, float("nan"), float("nan"), [], seed, msg)


def _tasks(cfg: ExperimentConfig) -> Iterator[_GraphTask]:
    graphs = select_graphs(cfg)
    deep = _deep_indices(cfg, [gi for gi, _ in graphs])
    for gi, g in graphs:
        depths = [p for p in cfg.depths if p == 1 or gi in deep]
        if not depths:
            continue
        yield _GraphTask(gi, g, cfg.strategy_names, depths, cfg.optimizer, cfg.deep_starts, cfg.master_seed, cfg.max_instances)


def run_experiment(cfg: ExperimentConfig) -> Iterator[ExperimentRecord]:
    """Stream records graph by graph in corpus order, independent of ``parallelism``."""
    tasks = _tasks(cfg)
    if cfg.parallelism == 1:
        for task in tasks:
            yield from _run_graph(task)
        return
    with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
        for batch in pool.map(_run_graph, tasks, chunksize=1):
            yield from batch


# ---------------------------------------------------------------- CSV


def write_records(records: Iterable[ExperimentRecord], path: str | Path) -> int:
    count = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_COLUMNS)
        for rec in records:
            writer.writerow(rec.as_row())
            count += 1
    return count


def read_records(path: str | Path) -> list[ExperimentRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RECORD_COLUMNS:
            raise ValueError(f"unexpected record columns: {reader.fieldnames}")
        return [ExperimentRecord.from_row(row) for row in reader]


def run_metadata(cfg: ExperimentConfig) -> dict:
    return {
        "config": config_to_dict(cfg),
        "percent_better": {"comparison": "strict", "tie_tolerance": TIE_TOLERANCE},
        "angle_box": {"gamma": [0.0, 2 * math.pi], "beta": [0.0, math.pi]},
        "gradient": "closed form at p=1, central differences (h=1e-6) otherwise",
    }


def run_to_csv(cfg: ExperimentConfig, path: str | Path) -> int:
    """Run the sweep, write the records CSV and a ``.meta.json`` sidecar."""
    path = Path(path)
    n = write_records(run_experiment(cfg), path)
    Path(str(path) + ".meta.json").write_text(json.dumps(run_metadata(cfg), indent=2, sort_keys=True) + "\n")
    return n


# ---------------------------------------------------------------- summary


@dataclass
class ARStats:
    count: int
    mean: float
    median: float
    q1: float
    q3: float
    min: float
    max: float


@dataclass
class SummaryStats:
    # (strategy, p) -> per-graph best AR statistics
    ar: dict[tuple[str, int], ARStats]
    # (strategy, p) -> AR statistics pooled over every instance record
    ar_instances: dict[tuple[str, int], ARStats]
    # (strategy or "family:<name>", p) -> fraction of graphs beating the baseline
    percent_better: dict[tuple[str, int], float]
    # (strategy, p) -> {graph_index: best AR over instances}
    best_ar: dict[tuple[str, int], dict[int, float]]


def strategy_family(name: str) -> str:
    return parse_strategy(name).family


def best_ar_per_graph(records: Iterable[ExperimentRecord]) -> dict[tuple[str, int], dict[int, float]]:
    best: dict[tuple[str, int], dict[int, float]] = {}
    for r in records:
        if not r.ok:
            continue
        slot = best.setdefault((r.strategy, r.p), {})
        prev = slot.get(r.graph_index)
        if prev is None or r.approximation_ratio > prev:
            slot[r.graph_index] = r.approximation_ratio
    return best


def _ar_stats(values: list[float]) -> ARStats:
    a = np.asarray(values, dtype=float)
    q1, med, q3 = np.percentile(a, [25, 50, 75])
    return ARStats(len(a), float(a.mean()), float(med), float(q1), float(q3), float(a.min()), float(a.max()))


def _fraction_better(candidate: dict[int, float], baseline: dict[int, float]) -> float:
    if not candidate:
        return float("nan")
    wins = sum(1 for gi, ar in candidate.items() if ar > baseline[gi] + TIE_TOLERANCE)
    return wins / len(candidate)


def summarize(records: Iterable[ExperimentRecord]) -> SummaryStats:
    """Per-graph best-of-instances AR statistics and percent-better tables.

    Raises ValueError when a strategy result has no standard baseline for the
    same graph and depth.
    """
    records = [r for r in records if r.ok]
    best = best_ar_per_graph(records)
    pooled_ars: dict[tuple[str, int], list[float]] = {}
    for r in records:
        pooled_ars.setdefault((r.strategy, r.p), []).append(r.approximation_ratio)
    for (name, p), per_graph in best.items():
        base = best.get(("standard", p), {})
        missing = sorted(set(per_graph) - set(base))
        if missing:
            raise ValueError(f"no standard baseline for graphs {missing[:5]} at p={p} (strategy {name})")

    ar = {key: _ar_stats(list(v.values())) for key, v in sorted(best.items())}
    better: dict[tuple[str, int], float] = {}
    pooled: dict[tuple[str, int], dict[int, float]] = {}
    for (name, p), per_graph in sorted(best.items()):
        if name == "standard":
            continue
        base = best[("standard", p)]
        better[(name, p)] = _fraction_better(per_graph, base)
        slot = pooled.setdefault((f"family:{strategy_family(name)}", p), {})
        for gi, v in per_graph.items():
            slot[gi] = max(v, slot.get(gi, -math.inf))
    for (fam, p), per_graph in sorted(pooled.items()):
        better[(fam, p)] = _fraction_better(per_graph, best[("standard", p)])
    ar_instances = {key: _ar_stats(v) for key, v in sorted(pooled_ars.items())}
    return SummaryStats(ar=ar, ar_instances=ar_instances, percent_better=better, best_ar=best)


def write_summary(stats: SummaryStats, prefix: str | Path) -> tuple[Path, Path]:
    """Write ``<prefix>_ar.csv`` (boxplot quartiles) and ``<prefix>_percent_better.csv``.

    The AR table has two row groups: ``aggregate=best`` (per-graph best over
    instances) and ``aggregate=all`` (every instance record pooled).
    """
    prefix = str(prefix)
    ar_path, pb_path = Path(prefix + "_ar.csv"), Path(prefix + "_percent_better.csv")
    with open(ar_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["strategy", "p", "aggregate", "count", "mean", "median", "q1", "q3", "min", "max"])
        for label, table in (("best", stats.ar), ("all", stats.ar_instances)):
            for (name, p), s in table.items():
                w.writerow([name, p, label, s.count] + [repr(x) for x in (s.mean, s.median, s.q1, s.q3, s.min, s.max)])
    with open(pb_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["strategy", "p", "percent_better"])
        for (name, p), frac in stats.percent_better.items():
            w.writerow([name, p, repr(100.0 * frac)])
    return ar_path, pb_path
