"""QAOA for MaxCut with phase operators built from graphs other than the cost graph."""

from .analytic import Angles1, P1Objective, PhaseEdgeStats, edge_expectation, edge_stats, total_expectation
from .experiment import ExperimentConfig, ExperimentRecord, load_config, run_experiment, summarize
from .graph import Graph, canonical_form, encode_graph6, parse_graph6, read_graph6_file
from .maxcut import cut_value, max_cut
from .optimizer import OptimizeConfig, OptimizeResult, grid_reference, optimize
from .simulator import AngleSchedule, qaoa_expectation
from .strategies import DEFAULT_STRATEGIES, StrategySpec, generate, parse_strategy

__all__ = [
    "AngleSchedule", "Angles1", "ExperimentConfig", "ExperimentRecord", "Graph", "OptimizeConfig",
    "OptimizeResult", "P1Objective", "DEFAULT_STRATEGIES", "PhaseEdgeStats", "StrategySpec",
    "canonical_form", "cut_value", "edge_expectation", "edge_stats", "encode_graph6", "generate",
    "grid_reference", "load_config", "max_cut", "optimize", "parse_graph6", "parse_strategy",
    "qaoa_expectation", "read_graph6_file", "run_experiment", "summarize", "total_expectation",
]
