"""Exact MaxCut by exhaustive enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph

MAX_CUT_VERTICES = 24


@dataclass(frozen=True)
class CutResult:
    value: int
    partition: tuple[int, ...]


def cut_value(g: Graph, assignment: Sequence[int]) -> int:
    if len(assignment) != g.n:
        raise ValueError(f"assignment has length {len(assignment)}, graph has {g.n} vertices")
    return sum(1 for u, v in g.edges if bool(assignment[u]) != bool(assignment[v]))


def max_cut(g: Graph) -> CutResult:
    """Optimal cut with vertex 0 fixed on side 0.

    Ties resolve to the lexicographically smallest partition vector.
    """
    if g.n > MAX_CUT_VERTICES:
        raise ValueError(f"max_cut supports n <= {MAX_CUT_VERTICES}, got {g.n}")
    n = g.n
    half = 1 << (n - 1)
    z = np.arange(half, dtype=np.int64)
    cuts = np.zeros(half, dtype=np.int16)
    for u, v in g.edges:
        cuts += (((z >> (n - 1 - u)) ^ (z >> (n - 1 - v))) & 1).astype(np.int16)
    best = int(np.argmax(cuts))
    partition = tuple((best >> (n - 1 - v)) & 1 for v in range(n))
    return CutResult(int(cuts[best]), partition)
