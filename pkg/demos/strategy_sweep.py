"""
Comparing operator strategies on a few graphs
=============================================

Runs every strategy on a handful of connected eight-vertex graphs at depth 1
and prints how often each one beats the standard operator.
"""

from pathlib import Path

from qaoa_phaseops import ExperimentConfig, run_experiment, summarize

corpus = Path(__file__).resolve().parents[1] / "tests" / "data" / "graph8c.g6"
cfg = ExperimentConfig(str(corpus), depths=[1], master_seed=7, subsample=10)

records = list(run_experiment(cfg))
stats = summarize(records)

print(f"{len(records)} records over {len({r.graph_index for r in records})} graphs")
# "best" keeps each graph's best instance; "all" averages every instance
print(f"{'strategy':<14}{'best':>8}{'all':>8}{'better':>9}")
for (name, p), s in stats.ar.items():
    better = stats.percent_better.get((name, p))
    pooled = stats.ar_instances[(name, p)].mean
    print(f"{name:<14}{s.mean:8.4f}{pooled:8.4f}{'' if better is None else f'{100 * better:8.0f}%':>9}")
for (name, p), frac in stats.percent_better.items():
    if name.startswith("family:"):
        print(f"{name[7:]} family, any instance better: {100 * frac:.0f}%")
