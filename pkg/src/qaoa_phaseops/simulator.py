"""Dense statevector QAOA with independent cost and phase-operator graphs.

Basis index ``z`` stores vertex ``v`` in bit ``(z >> v) & 1``. The phase
unitary multiplies each amplitude by ``exp(-1j * gamma * cut(z))`` where the
cut is taken in the operator graph; the mixer is ``exp(-1j * beta * X)`` on
every qubit. All batched routines take a leading axis of independent angle
schedules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .graph import Graph

MAX_QUBITS = 24
FD_STEP = 1e-6


@dataclass
class AngleSchedule:
    gammas: list[float]
    betas: list[float]

    def __post_init__(self):
        self.gammas = [float(x) for x in self.gammas]
        self.betas = [float(x) for x in self.betas]
        if len(self.gammas) != len(self.betas) or not self.gammas:
            raise ValueError("gammas and betas must be nonempty and of equal length")

    @property
    def p(self) -> int:
        return len(self.gammas)

    def as_array(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_array(cls, x: Sequence[float]) -> "AngleSchedule":
        x = list(x)
        if len(x) % 2:
            raise ValueError("flat angle vector must have even length (gammas then betas)")
        p = len(x) // 2
        return cls(x[:p], x[p:])


@dataclass
class Statevector:
    amplitudes: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.amplitudes.shape[-1]).bit_length() - 1

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@lru_cache(maxsize=256)
def cut_diagonal(g: Graph) -> np.ndarray:
    """Cut value of ``g`` for every computational basis state (read-only)."""
    z = np.arange(1 << g.n, dtype=np.int64)
    cuts = np.zeros(1 << g.n, dtype=np.float64)
    for u, v in g.edges:
        cuts += ((z >> u) ^ (z >> v)) & 1
    cuts.flags.writeable = False
    return cuts


def initial_state(n: int) -> Statevector:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
    dim = 1 << n
    return Statevector(np.full(dim, dim ** -0.5, dtype=np.complex128))


def _check_size(state_dim: int, g: Graph) -> None:
    if state_dim != 1 << g.n:
        raise ValueError(f"graph has {g.n} vertices but state has dimension {state_dim}")


def apply_phase(state: Statevector, op_graph: Graph, gamma: float) -> Statevector:
    _check_size(state.amplitudes.shape[-1], op_graph)
    state.amplitudes *= np.exp(-1j * gamma * cut_diagonal(op_graph))
    return state


def apply_mixer(state: Statevector, beta: float) -> Statevector:
    amps = state.amplitudes
    _mix_batch(amps[None, :], np.array([beta]))
    return state


def _rotation_power(beta: np.ndarray, count: int) -> np.ndarray:
    """Batched ``exp(-i beta X)`` tensored ``count`` times; shape (S, 2**count, 2**count)."""
    c, ms = np.cos(beta), -1j * np.sin(beta)
    r = np.empty((beta.shape[0], 2, 2), dtype=np.complex128)
    r[:, 0, 0] = r[:, 1, 1] = c
    r[:, 0, 1] = r[:, 1, 0] = ms
    out = np.ones((beta.shape[0], 1, 1), dtype=np.complex128)
    for _ in range(count):
        dim = out.shape[1] * 2
        out = (out[:, :, None, :, None] * r[:, None, :, None, :]).reshape(-1, dim, dim)
    return out


def _mix_batch(amps: np.ndarray, beta: np.ndarray) -> None:
    """In-place ``exp(-i beta X)`` on every qubit; ``amps`` has shape (S, 2**n).

    The qubits are split into a high and a low block and the tensor-power
    rotation of each block is applied as a batched matrix product (the
    rotation is symmetric, so no transpose is needed on the right).
    """
    s, dim = amps.shape
    n = dim.bit_length() - 1
    lo = n // 2
    hi = n - lo
    view = amps.reshape(s, 1 << hi, 1 << lo)
    out = view
    if lo:
        out = out @ _rotation_power(beta, lo)
    out = _rotation_power(beta, hi) @ out
    view[...] = out


def final_states(op_graph: Graph, gammas: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """Batched QAOA states; ``gammas``/``betas`` have shape (S, p)."""
    gammas = np.atleast_2d(np.asarray(gammas, dtype=float))
    betas = np.atleast_2d(np.asarray(betas, dtype=float))
    s = gammas.shape[0]
    dim = 1 << op_graph.n
    cuts = cut_diagonal(op_graph).astype(np.intp)
    levels = np.arange(len(op_graph.edges) + 1)
    amps = np.full((s, dim), dim ** -0.5, dtype=np.complex128)
    for layer in range(gammas.shape[1]):
        # cut values are small integers: exponentiate once per level, then gather
        phases = np.exp(-1j * np.outer(gammas[:, layer], levels))
        amps *= phases[:, cuts]
        _mix_batch(amps, betas[:, layer])
    return amps


def expectation_batch(cost_graph: Graph, op_graph: Graph, x: np.ndarray) -> np.ndarray:
    """Expected cost-graph cut for each row of ``x = [gammas..., betas...]``."""
    if cost_graph.n != op_graph.n:
        raise ValueError(f"vertex count mismatch: cost graph {cost_graph.n}, operator graph {op_graph.n}")
    x = np.atleast_2d(np.asarray(x, dtype=float))
    p = x.shape[1] // 2
    amps = final_states(op_graph, x[:, :p], x[:, p:])
    probs = amps.real ** 2 + amps.imag ** 2
    return probs @ cut_diagonal(cost_graph)


def gradient_batch(cost_graph: Graph, op_graph: Graph, x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Central finite differences for each row of ``x``; shape (S, 2p)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    s, k = x.shape
    shifted = np.repeat(x[:, None, :], 2 * k, axis=1)
    idx = np.arange(k)
    shifted[:, idx, idx] += step
    shifted[:, k + idx, idx] -= step
    vals = expectation_batch(cost_graph, op_graph, shifted.reshape(-1, k)).reshape(s, 2 * k)
    return (vals[:, :k] - vals[:, k:]) / (2 * step)


def qaoa_expectation(cost_graph: Graph, op_graph: Graph, schedule: AngleSchedule) -> float:
    if cost_graph.n != op_graph.n:
        raise ValueError(f"vertex count mismatch: cost graph {cost_graph.n}, operator graph {op_graph.n}")
    state = initial_state(op_graph.n)
    for gamma, beta in zip(schedule.gammas, schedule.betas):
        apply_phase(state, op_graph, gamma)
        apply_mixer(state, beta)
    probs = np.abs(state.amplitudes) ** 2
    return float(probs @ cut_diagonal(cost_graph))


def gradient(cost_graph: Graph, op_graph: Graph, schedule: AngleSchedule, step: float = FD_STEP) -> list[float]:
    """Central-difference gradient ordered ``(gamma_1..gamma_p, beta_1..beta_p)``."""
    return gradient_batch(cost_graph, op_graph, schedule.as_array()[None, :], step)[0].tolist()
