"""Multi-start L-BFGS maximization of the QAOA expectation.

All starts advance together: the two-loop recursion, line search and
stopping tests are vectorized over a leading "start" axis, so one objective
call evaluates every live start at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import P1Objective
from .graph import Graph
from .simulator import AngleSchedule, expectation_batch, gradient_batch

GAMMA_PERIOD = 2 * math.pi
BETA_PERIOD = math.pi


class BatchObjective:
    """Batched objective over rows ``x = [gammas..., betas...]`` (to be maximized).

    ``step_block`` is how many backtracking step lengths the line search
    evaluates per call; large blocks pay off when a call is overhead-bound.
    """

    step_block = 1

    def value(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value_and_grad(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError


class AnalyticP1(BatchObjective):
    step_block = 8

    def __init__(self, cost_graph: Graph, op_graph: Graph):
        self._obj = P1Objective(cost_graph, op_graph)

    def value(self, x):
        return self._obj(x[:, 0], x[:, 1])

    def value_and_grad(self, x):
        v, dg, db = self._obj.value_and_grad(x[:, 0], x[:, 1])
        return v, np.stack([dg, db], axis=1)


class Simulated(BatchObjective):
    """Statevector expectation with central-difference gradients."""

    def __init__(self, cost_graph: Graph, op_graph: Graph):
        if cost_graph.n != op_graph.n:
            raise ValueError(f"vertex count mismatch: cost graph {cost_graph.n}, operator graph {op_graph.n}")
        self.cost_graph, self.op_graph = cost_graph, op_graph

    def value(self, x):
        return expectation_batch(self.cost_graph, self.op_graph, x)

    def value_and_grad(self, x):
        return self.value(x), gradient_batch(self.cost_graph, self.op_graph, x)


@dataclass
class OptimizeConfig:
    n_starts: int = 100
    seed: int = 0
    max_iterations: int = 500
    gradient_tolerance: float = 1e-8
    memory: int = 10
    function_tolerance: float = 1e-13
    analytic_p1: bool = True

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.gradient_tolerance <= 0 or self.function_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class OptimizeResult:
    best_value: float
    best_schedule: AngleSchedule
    starts_converged: int
    evaluations: int
    start_values: np.ndarray = field(repr=False, default=None)


@dataclass
class BatchResult:
    x: np.ndarray
    values: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray
    evaluations: int


def start_points(p: int, n_starts: int, seed: int) -> np.ndarray:
    """Uniform initial angles in the box from a Philox stream keyed by ``seed``.

    Start ``i`` consumes draws ``2p*i .. 2p*(i+1)-1`` of the counter-based
    stream, so any start can be regenerated independently with ``advance``.
    """
    rng = np.random.Generator(np.random.Philox(key=seed % (1 << 64)))
    u = rng.random((n_starts, 2 * p))
    u[:, :p] *= GAMMA_PERIOD
    u[:, p:] *= BETA_PERIOD
    return u


def wrap_angles(x: np.ndarray) -> np.ndarray:
    x = np.array(x, dtype=float)
    p = x.shape[-1] // 2
    x[..., :p] = np.mod(x[..., :p], GAMMA_PERIOD)
    x[..., p:] = np.mod(x[..., p:], BETA_PERIOD)
    return x


def _two_loop(gh, hs, hy, hr):
    """L-BFGS direction ``-H g`` for a batch; history index 0 is the newest pair."""
    q = gh.copy()
    memory = hr.shape[1]
    alpha = np.zeros((gh.shape[0], memory))
    depth = int(np.count_nonzero(hr.any(axis=0)))  # slots past this are empty for every start
    for j in range(depth):
        alpha[:, j] = hr[:, j] * np.einsum("ij,ij->i", hs[:, j], q)
        q -= alpha[:, j, None] * hy[:, j]
    have = hr[:, 0] > 0
    yy = np.einsum("ij,ij->i", hy[:, 0], hy[:, 0])
    scale = np.empty(gh.shape[0])
    scale[have] = 1.0 / (hr[have, 0] * yy[have])
    # no curvature yet: a step of length at most one
    scale[~have] = 1.0 / np.maximum(np.linalg.norm(gh[~have], axis=1), 1.0)
    q *= scale[:, None]
    for j in range(depth - 1, -1, -1):
        b = hr[:, j] * np.einsum("ij,ij->i", hy[:, j], q)
        q += (alpha[:, j] - b)[:, None] * hs[:, j]
    return -q


def lbfgs_maximize(
    objective: BatchObjective,
    x0: np.ndarray,
    max_iterations: int = 500,
    gradient_tolerance: float = 1e-8,
    function_tolerance: float = 1e-13,
    memory: int = 10,
    max_backtracks: int = 40,
) -> BatchResult:
    """Independent L-BFGS ascents from every row of ``x0``.

    Steps come from Armijo backtracking over ``t = 1, 1/2, 1/4, ...``;
    curvature pairs with non-positive ``s.y`` are skipped. A start stops when
    its gradient max-norm drops below ``gradient_tolerance`` or its relative
    improvement falls below ``function_tolerance``; both count as converged.
    Starts that exhaust ``max_iterations`` or fail the line search do not,
    unless the gradient is already within ``sqrt(gradient_tolerance)``.
    """
    x = np.array(x0, dtype=float)
    s_count, k = x.shape
    block = max(1, int(objective.step_block))
    f, g = objective.value_and_grad(x)
    # work with the minimization of h = -f
    h, gh = -f, -g
    nfev = s_count
    hist_s = np.zeros((s_count, memory, k))
    hist_y = np.zeros((s_count, memory, k))
    hist_rho = np.zeros((s_count, memory))
    converged = np.max(np.abs(gh), axis=1) < gradient_tolerance
    active = ~converged
    iters = np.zeros(s_count, dtype=np.int64)
    halvings = 0.5 ** np.arange(block)

    for _ in range(max_iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        d = _two_loop(gh[idx], hist_s[idx], hist_y[idx], hist_rho[idx])
        slope = np.einsum("ij,ij->i", d, gh[idx])
        bad = ~(slope < 0)
        if bad.any():
            # lost descent: restart from steepest descent with empty history
            d[bad] = -gh[idx[bad]]
            slope[bad] = -np.einsum("ij,ij->i", d[bad], d[bad])
            hist_rho[idx[bad]] = 0.0
            hist_s[idx[bad]] = 0.0
            hist_y[idx[bad]] = 0.0

        t0 = np.ones(idx.size)
        pending = np.ones(idx.size, dtype=bool)
        x_new = x[idx].copy()
        h_new = h[idx].copy()
        for _round in range(-(-max_backtracks // block)):
            pi = np.flatnonzero(pending)
            if pi.size == 0:
                break
            steps = t0[pi, None] * halvings[None, :]
            trial = x[idx[pi], None, :] + steps[:, :, None] * d[pi, None, :]
            ht = -objective.value(trial.reshape(-1, k)).reshape(pi.size, block)
            nfev += ht.size
            ok = ht <= h[idx[pi], None] + 1e-4 * steps * slope[pi, None]
            hit = ok.any(axis=1)
            rows = np.flatnonzero(hit)
            sel = np.argmax(ok, axis=1)[rows]
            acc = pi[rows]
            x_new[acc] = trial[rows, sel]
            h_new[acc] = ht[rows, sel]
            pending[acc] = False
            t0[pi[~hit]] *= 0.5 ** block

        failed = pending
        moved = ~failed
        mi = idx[moved]
        g_new = np.empty((mi.size, k))
        if mi.size:
            f_acc, g_acc = objective.value_and_grad(x_new[moved])
            nfev += mi.size
            h_new[moved] = -f_acc
            g_new = -g_acc
        s_vec = x_new[moved] - x[mi]
        y_vec = g_new - gh[mi]
        sy = np.einsum("ij,ij->i", s_vec, y_vec)
        upd = sy > 1e-12 * np.linalg.norm(s_vec, axis=1) * np.linalg.norm(y_vec, axis=1)
        ui = mi[upd]
        hist_s[ui] = np.concatenate([s_vec[upd, None], hist_s[ui, :-1]], axis=1)
        hist_y[ui] = np.concatenate([y_vec[upd, None], hist_y[ui, :-1]], axis=1)
        hist_rho[ui] = np.concatenate([(1.0 / sy[upd])[:, None], hist_rho[ui, :-1]], axis=1)

        h_old = h[mi]
        x[mi], h[mi], gh[mi] = x_new[moved], h_new[moved], g_new
        iters[idx] += 1

        gconv = np.max(np.abs(gh[mi]), axis=1) < gradient_tolerance
        scale = np.maximum(np.maximum(np.abs(h_old), np.abs(h[mi])), 1.0)
        fconv = (h_old - h[mi]) <= function_tolerance * scale
        done = mi[gconv | fconv]
        converged[done] = True
        active[done] = False
        fi = idx[failed]
        converged[fi[np.max(np.abs(gh[fi]), axis=1) < math.sqrt(gradient_tolerance)]] = True
        active[fi] = False

    return BatchResult(x=x, values=-h, converged=converged, iterations=iters, evaluations=int(nfev))


def make_objective(cost_graph: Graph, op_graph: Graph, p: int, analytic_p1: bool = True) -> BatchObjective:
    if p == 1 and analytic_p1:
        return AnalyticP1(cost_graph, op_graph)
    return Simulated(cost_graph, op_graph)


def optimize(cost_graph: Graph, op_graph: Graph, p: int, cfg: OptimizeConfig | None = None) -> OptimizeResult:
    """Best expectation found over ``cfg.n_starts`` independent ascents.

    Depth 1 uses the closed form (unless ``cfg.analytic_p1`` is off);
    deeper circuits use the statevector simulator.
    """
    cfg = cfg or OptimizeConfig()
    if p < 1:
        raise ValueError("p must be >= 1")
    objective = make_objective(cost_graph, op_graph, p, cfg.analytic_p1)
    res = lbfgs_maximize(
        objective,
        start_points(p, cfg.n_starts, cfg.seed),
        max_iterations=cfg.max_iterations,
        gradient_tolerance=cfg.gradient_tolerance,
        function_tolerance=cfg.function_tolerance,
        memory=cfg.memory,
    )
    x = wrap_angles(res.x)
    # reevaluate at the reported angles; argmax keeps the lowest start index on ties
    values = objective.value(x)
    best = int(np.argmax(values))
    return OptimizeResult(
        best_value=float(values[best]),
        best_schedule=AngleSchedule.from_array(x[best]),
        starts_converged=int(res.converged.sum()),
        evaluations=res.evaluations + x.shape[0],
        start_values=values,
    )


def grid_reference(cost_graph: Graph, op_graph: Graph, resolution: int) -> float:
    """Max of the depth-1 closed form over a uniform grid on the angle box."""
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    obj = P1Objective(cost_graph, op_graph)
    gammas = np.arange(resolution) * (GAMMA_PERIOD / resolution)
    betas = np.arange(resolution) * (BETA_PERIOD / resolution)
    best = -np.inf
    for gamma in gammas:
        best = max(best, float(obj(np.full(resolution, gamma), betas).max()))
    return best
