"""Closed-form depth-1 MaxCut expectation for an arbitrary phase-operator graph.

For a cost edge ``(u, v)`` and operator graph ``H`` the expected cut
contribution after one QAOA layer is::

    1/2 + chi/4 * sin(4b) sin(g) (cos(g)^d + cos(g)^e)
        - 1/4 * sin(2b)^2 * cos(g)^(d + e - 2f) * (1 - cos(2g)^f)

with ``chi`` the membership of ``(u, v)`` in ``H``, ``d``/``e`` the operator
degrees of ``u``/``v`` not counting the edge to each other, and ``f`` the
number of common ``H``-neighbours of ``u`` and ``v``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class PhaseEdgeStats:
    chi: int
    d: int
    e: int
    f: int


@dataclass(frozen=True)
class Angles1:
    gamma: float
    beta: float


def edge_stats(cost_edge: tuple[int, int], op_graph: Graph) -> PhaseEdgeStats:
    u, v = cost_edge
    if not (0 <= u < op_graph.n and 0 <= v < op_graph.n):
        raise ValueError(f"edge {cost_edge} out of range for operator graph on {op_graph.n} vertices")
    nu, nv = op_graph.neighbors(u), op_graph.neighbors(v)
    chi = int(v in nu)
    return PhaseEdgeStats(chi=chi, d=len(nu) - chi, e=len(nv) - chi, f=len((nu & nv) - {u, v}))


def edge_expectation(stats: PhaseEdgeStats, a: Angles1) -> float:
    g, b = a.gamma, a.beta
    cg = math.cos(g)
    value = 0.5
    if stats.chi:
        value += 0.25 * math.sin(4 * b) * math.sin(g) * (cg ** stats.d + cg ** stats.e)
    if stats.f:
        k = stats.d + stats.e - 2 * stats.f
        value -= 0.25 * math.sin(2 * b) ** 2 * cg ** k * (1 - math.cos(2 * g) ** stats.f)
    return value


def _check_sizes(cost_graph: Graph, op_graph: Graph) -> None:
    if cost_graph.n != op_graph.n:
        raise ValueError(f"vertex count mismatch: cost graph {cost_graph.n}, operator graph {op_graph.n}")


def total_expectation(cost_graph: Graph, op_graph: Graph, a: Angles1) -> float:
    _check_sizes(cost_graph, op_graph)
    return sum(edge_expectation(edge_stats(e, op_graph), a) for e in cost_graph.sorted_edges())


class P1Objective:
    """Vectorized closed form over batches of ``(gamma, beta)`` points.

    Cost edges sharing the same ``(chi, d, e, f)`` are merged, so evaluation
    cost scales with the number of distinct edge types.
    """

    def __init__(self, cost_graph: Graph, op_graph: Graph):
        _check_sizes(cost_graph, op_graph)
        counts = Counter(edge_stats(e, op_graph) for e in cost_graph.sorted_edges())
        kinds = sorted(counts, key=lambda s: (s.chi, s.d, s.e, s.f))
        self.n_edges = len(cost_graph.edges)
        w = np.array([counts[s] for s in kinds], dtype=float)
        chi = np.array([s.chi for s in kinds], dtype=bool)
        # linear term only needs chi = 1 kinds; triangle term only f > 0 kinds
        self._lin_w = w[chi]
        self._lin_d = np.array([s.d for s in kinds], dtype=np.int64)[chi]
        self._lin_e = np.array([s.e for s in kinds], dtype=np.int64)[chi]
        tri = np.array([s.f > 0 for s in kinds], dtype=bool)
        self._tri_w = w[tri]
        self._tri_f = np.array([s.f for s in kinds], dtype=np.int64)[tri]
        self._tri_k = np.array([s.d + s.e - 2 * s.f for s in kinds], dtype=np.int64)[tri]
        self._lin_dm1 = np.maximum(self._lin_d - 1, 0)
        self._lin_em1 = np.maximum(self._lin_e - 1, 0)
        self._tri_km1 = np.maximum(self._tri_k - 1, 0)
        self._tri_fm1 = np.maximum(self._tri_f - 1, 0)
        self._max_c = int(max(self._lin_d.max(initial=0), self._lin_e.max(initial=0), self._tri_k.max(initial=0)))
        self._max_f = int(self._tri_f.max(initial=0))

    def __call__(self, gamma, beta) -> np.ndarray:
        return self.value_and_grad(gamma, beta, grad=False)[0]

    def value_and_grad(self, gamma, beta, grad: bool = True):
        """Return ``(value, d/dgamma, d/dbeta)``; derivatives are None if ``grad`` is false."""
        gamma = np.asarray(gamma, dtype=float)
        beta = np.asarray(beta, dtype=float)
        cg, sg = np.cos(gamma), np.sin(gamma)
        c2 = np.cos(2 * gamma)
        pc = _power_table(cg, self._max_c)
        p2 = _power_table(c2, self._max_f)

        lin = _weighted_sum(self._lin_w, pc[..., self._lin_d] + pc[..., self._lin_e])
        ck = pc[..., self._tri_k]
        c2f = p2[..., self._tri_f]
        tri = _weighted_sum(self._tri_w, ck * (1.0 - c2f))

        s4b, s2b = np.sin(4 * beta), np.sin(2 * beta)
        value = 0.5 * self.n_edges + 0.25 * s4b * sg * lin - 0.25 * s2b ** 2 * tri
        if not grad:
            return value, None, None

        # d/dx x**k = k x**(k-1); the k == 0 column is multiplied away
        dlin = -sg * _weighted_sum(
            self._lin_w,
            self._lin_d * pc[..., self._lin_dm1] + self._lin_e * pc[..., self._lin_em1],
        )
        dtri = _weighted_sum(
            self._tri_w,
            -sg[..., None] * self._tri_k * pc[..., self._tri_km1] * (1.0 - c2f)
            + ck * (2.0 * np.sin(2 * gamma))[..., None] * self._tri_f * p2[..., self._tri_fm1],
        )
        d_gamma = 0.25 * s4b * (cg * lin + sg * dlin) - 0.25 * s2b ** 2 * dtri
        d_beta = np.cos(4 * beta) * sg * lin - 0.5 * np.sin(4 * beta) * tri
        return value, d_gamma, d_beta


def _power_table(x: np.ndarray, top: int) -> np.ndarray:
    """``x**j`` for ``j = 0..top`` along a new last axis, by repeated products (0**0 == 1)."""
    out = np.empty(x.shape + (top + 1,))
    out[..., 0] = 1.0
    for j in range(1, top + 1):
        out[..., j] = out[..., j - 1] * x
    return out


def _weighted_sum(w: np.ndarray, terms: np.ndarray) -> np.ndarray:
    if w.size == 0:
        return np.zeros(terms.shape[:-1])
    return terms @ w
