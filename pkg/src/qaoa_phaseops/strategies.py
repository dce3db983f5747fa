"""Phase-operator graph construction strategies.

Each generator returns a list of :class:`PhaseOpInstance` whose operator
graphs are pairwise non-isomorphic. Sampled strategies draw from
``numpy.random.default_rng(spec.seed)`` and give up after
``100 * max_instances`` draws.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .graph import Graph, canonical_form, degree

STANDARD = "standard"
RANDOM = "random"
SUBGRAPH = "sub"
TR_MOST = "tr-most"  # k consecutive most-triangle removals
TR_ALL = "tr-all"
TR_RANDOM = "tr-random"
MDER = "mder"
MDER_ALL = "mder-all"

ATTEMPTS_PER_INSTANCE = 100

DEFAULT_STRATEGIES = (
    "standard", "random", "sub-1/4", "sub-1/3", "sub-1/2", "sub-2/3", "sub-3/4",
    "tr-most", "tr-2most", "tr-all", "tr-random", "mder-1", "mder-2", "mder-all",
)


@dataclass(frozen=True)
class StrategySpec:
    kind: str
    alpha: Fraction | None = None
    k: int = 1
    max_instances: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.kind not in {STANDARD, RANDOM, SUBGRAPH, TR_MOST, TR_ALL, TR_RANDOM, MDER, MDER_ALL}:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.max_instances < 1:
            raise ValueError("max_instances must be >= 1")
        if self.kind == SUBGRAPH:
            if self.alpha is None or not 0 < self.alpha <= 1:
                raise ValueError(f"subgraph fraction must lie in (0, 1], got {self.alpha}")
        if self.kind in (TR_MOST, MDER) and self.k < 1:
            raise ValueError("k must be a positive integer")

    @property
    def name(self) -> str:
        if self.kind == SUBGRAPH:
            return f"sub-{self.alpha}"
        if self.kind == TR_MOST:
            return "tr-most" if self.k == 1 else f"tr-{self.k}most"
        if self.kind == MDER:
            return f"mder-{self.k}"
        return self.kind

    @property
    def family(self) -> str:
        return {SUBGRAPH: "sub", TR_MOST: "tr", TR_ALL: "tr", TR_RANDOM: "tr", MDER: "mder", MDER_ALL: "mder"}.get(
            self.kind, self.kind
        )

    def with_seed(self, seed: int) -> "StrategySpec":
        return replace(self, seed=seed)


def parse_strategy(name: str, max_instances: int = 10, seed: int = 0) -> StrategySpec:
    """Parse a serialized strategy name such as ``sub-2/3``, ``tr-2most`` or ``mder-all``."""
    text = name.strip().lower()
    common = dict(max_instances=max_instances, seed=seed)
    if text in (STANDARD, RANDOM, TR_ALL, TR_RANDOM, MDER_ALL):
        return StrategySpec(text, **common)
    if text == "tr-most":
        return StrategySpec(TR_MOST, k=1, **common)
    m = re.fullmatch(r"tr-(\d+)most", text)
    if m:
        return StrategySpec(TR_MOST, k=int(m.group(1)), **common)
    m = re.fullmatch(r"mder-(\d+)", text)
    if m:
        return StrategySpec(MDER, k=int(m.group(1)), **common)
    m = re.fullmatch(r"sub-(.+)", text)
    if m:
        try:
            alpha = Fraction(m.group(1))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad subgraph fraction in {name!r}") from None
        return StrategySpec(SUBGRAPH, alpha=alpha, **common)
    raise ValueError(f"unknown strategy name {name!r}")


@dataclass(frozen=True)
class PhaseOpInstance:
    operator_graph: Graph
    strategy: StrategySpec
    instance_index: int


def _invariant(g: Graph) -> tuple:
    # isomorphism-invariant: per-vertex degree, neighbour degrees and triangle count
    degs = [len(g.neighbors(v)) for v in range(g.n)]
    per_vertex = []
    for v in range(g.n):
        nb = g.neighbors(v)
        tri = sum(len(nb & g.neighbors(w)) for w in nb)
        per_vertex.append((degs[v], tri, tuple(sorted(degs[w] for w in nb))))
    return tuple(sorted(per_vertex))


class _Dedup:
    """Collects pairwise non-isomorphic graphs.

    Graphs are bucketed by a cheap isomorphism invariant; the exhaustive
    canonical form is computed only when a bucket already holds a graph.
    """

    def __init__(self):
        self._seen_labeled: set[frozenset] = set()
        self._buckets: dict[tuple, list[list]] = {}
        self.graphs: list[Graph] = []

    @property
    def labeled_seen(self) -> int:
        return len(self._seen_labeled)

    def offer(self, g: Graph) -> None:
        if g.edges in self._seen_labeled:
            return
        self._seen_labeled.add(g.edges)
        bucket = self._buckets.setdefault(_invariant(g), [])
        if bucket:
            cf = canonical_form(g)
            for member in bucket:
                if member[1] is None:
                    member[1] = canonical_form(member[0])
                if member[1] == cf:
                    return
            bucket.append([g, cf])
        else:
            bucket.append([g, None])
        self.graphs.append(g)


def _sample_distinct(
    draw: Callable[[np.random.Generator], Graph], spec: StrategySpec, labeled_total: int | None = None
) -> list[Graph]:
    """Rejection-sample up to ``max_instances`` isomorphism classes.

    ``labeled_total`` (the number of distinct labeled outcomes, when known)
    allows stopping once every outcome has been seen.
    """
    rng = np.random.default_rng(spec.seed % (1 << 64))
    dedup = _Dedup()
    for _ in range(ATTEMPTS_PER_INSTANCE * spec.max_instances):
        dedup.offer(draw(rng))
        if len(dedup.graphs) >= spec.max_instances:
            break
        if labeled_total is not None and dedup.labeled_seen >= labeled_total:
            break
    return dedup.graphs


def _wrap(graphs: list[Graph], spec: StrategySpec) -> list[PhaseOpInstance]:
    return [PhaseOpInstance(g, spec, i) for i, g in enumerate(graphs)]


def _pick_edges(pool: list[tuple[int, int]], m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    chosen = rng.choice(len(pool), size=m, replace=False)
    return [pool[i] for i in sorted(chosen)]


# ---------------------------------------------------------------- strategies


def gen_standard(g: Graph, spec: StrategySpec) -> list[PhaseOpInstance]:
    return [PhaseOpInstance(g, spec, 0)]


def gen_random(g: Graph, spec: StrategySpec) -> list[PhaseOpInstance]:
    """Operator graphs with ``|E(g)|`` edges drawn from the complete graph."""
    m = len(g.edges)
    if m == 0:
        raise ValueError("random operator needs a cost graph with at least one edge")
    pool = list(itertools.combinations(range(g.n), 2))
    graphs = _sample_distinct(
        lambda rng: Graph(g.n, _pick_edges(pool, m, rng)), spec, labeled_total=math.comb(len(pool), m)
    )
    return _wrap(graphs, spec)


def subgraph_size(g: Graph, alpha: Fraction) -> int:
    return math.ceil(Fraction(alpha) * len(g.edges))


def gen_subgraph(g: Graph, spec: StrategySpec) -> list[PhaseOpInstance]:
    """Random ``ceil(alpha |E|)``-edge subgraphs of the cost graph."""
    m = subgraph_size(g, spec.alpha)
    if m == 0:
        raise ValueError("subgraph operator would be empty")
    pool = g.sorted_edges()
    graphs = _sample_distinct(
        lambda rng: Graph(g.n, _pick_edges(pool, m, rng)), spec, labeled_total=math.comb(len(pool), m)
    )
    return _wrap(graphs, spec)


def _triangle_counts(g: Graph) -> dict[tuple[int, int], int]:
    return {(u, v): len(g.neighbors(u) & g.neighbors(v)) for u, v in g.edges}


def remove_most_triangle_edge(g: Graph) -> Graph | None:
    """Drop the edge in the most triangles (ties: smallest ``(u, v)``); None if triangle-free."""
    counts = _triangle_counts(g)
    best = max(counts.values(), default=0)
    if best == 0:
        return None
    edge = min(e for e, c in counts.items() if c == best)
    return g.without_edges([edge])


def gen_tr(g: Graph, spec: StrategySpec) -> list[PhaseOpInstance]:
    counts = _triangle_counts(g)
    tri_edges = sorted(e for e, c in counts.items() if c > 0)
    if not tri_edges:
        return [PhaseOpInstance(g, spec, 0)]
    if spec.kind == TR_RANDOM:
        graphs = _sample_distinct(
            lambda rng: g.without_edges([tri_edges[int(rng.integers(len(tri_edges)))]]),
            spec,
            labeled_total=len(tri_edges),
        )
        return _wrap(graphs, spec)
    if spec.kind not in (TR_MOST, TR_ALL):
        raise ValueError(f"gen_tr cannot handle strategy {spec.name!r}")
    steps = spec.k if spec.kind == TR_MOST else len(g.edges)
    cur = g
    for _ in range(steps):
        nxt = remove_most_triangle_edge(cur)
        if nxt is None:
            break
        cur = nxt
    return [PhaseOpInstance(cur, spec, 0)]


def max_degree_vertex(g: Graph) -> int:
    degs = [degree(g, v) for v in range(g.n)]
    return degs.index(max(degs))


def gen_mder(g: Graph, spec: StrategySpec) -> list[PhaseOpInstance]:
    if not g.edges:
        raise ValueError("MDER operators need at least one cost edge")
    if spec.kind == MDER_ALL:
        v = max_degree_vertex(g)
        return [PhaseOpInstance(g.without_edges((v, w) for w in g.neighbors(v)), spec, 0)]
    if spec.kind != MDER:
        raise ValueError(f"gen_mder cannot handle strategy {spec.name!r}")
    if spec.k >= len(g.edges):
        raise ValueError(f"MDER-{spec.k} would leave no edges in a graph with {len(g.edges)} edges")

    def draw(rng: np.random.Generator) -> Graph:
        cur = g
        for _ in range(spec.k):
            v = max_degree_vertex(cur)
            nbrs = sorted(cur.neighbors(v))
            w = nbrs[int(rng.integers(len(nbrs)))]
            cur = cur.without_edges([(v, w)])
        return cur

    return _wrap(_sample_distinct(draw, spec), spec)


_DISPATCH = {
    STANDARD: gen_standard,
    RANDOM: gen_random,
    SUBGRAPH: gen_subgraph,
    TR_MOST: gen_tr,
    TR_ALL: gen_tr,
    TR_RANDOM: gen_tr,
    MDER: gen_mder,
    MDER_ALL: gen_mder,
}


def generate(g: Graph, spec: StrategySpec | str) -> list[PhaseOpInstance]:
    if isinstance(spec, str):
        spec = parse_strategy(spec)
    return _DISPATCH[spec.kind](g, spec)
