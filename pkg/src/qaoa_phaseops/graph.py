"""Simple undirected graphs, graph6 I/O and brute-force canonical labeling."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

import numpy as np

MAX_VERTICES = 24
MAX_CANONICAL_VERTICES = 10
_GRAPH6_OFFSET = 63


class Graph6Error(ValueError):
    """Raised for malformed graph6 input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Graph:
    """Labeled simple graph on vertices ``0..n-1``.

    Edges are normalized to ``(u, v)`` with ``u < v`` and stored as a frozenset.
    """

    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        n = int(n)
        if not 1 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in [1, {MAX_VERTICES}], got {n}")
        norm = set()
        for e in edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {(u, v)} out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in norm:
                raise ValueError(f"duplicate edge {key}")
            norm.add(key)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"

    def __len__(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @cached_property
    def _adj(self) -> tuple[frozenset, ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            a[u, v] = a[v, u] = True
        return a

    def without_edges(self, removed: Iterable[tuple[int, int]]) -> "Graph":
        drop = {(u, v) if u < v else (v, u) for u, v in removed}
        return Graph(self.n, self.edges - drop)

    def relabel(self, perm: Iterable[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        perm = list(perm)
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges))


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def star_graph(n: int) -> Graph:
    """Star on ``n`` vertices with the center labeled ``n - 1``."""
    return Graph(n, ((i, n - 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


# ---------------------------------------------------------------- queries


def degree(g: Graph, v: int) -> int:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    return len(g.neighbors(v))


def triangles_through_edge(g: Graph, e: tuple[int, int]) -> int:
    u, v = e
    if not g.has_edge(u, v):
        raise ValueError(f"{e} is not an edge of the graph")
    return len(g.neighbors(u) & g.neighbors(v))


def triangle_count(g: Graph) -> int:
    return sum(triangles_through_edge(g, e) for e in g.edges) // 3


def connected(g: Graph) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        for w in g.neighbors(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


# ---------------------------------------------------------------- graph6


def _upper_pairs(n: int) -> Iterator[tuple[int, int]]:
    # graph6 order: column-major over the upper triangle
    for j in range(1, n):
        for i in range(j):
            yield i, j


def encode_graph6(g: Graph) -> str:
    if g.n > 62:
        raise ValueError("graph6 long form (n > 62) is not supported")
    bits = [1 if (i, j) in g.edges else 0 for i, j in _upper_pairs(g.n)]
    bits += [0] * (-len(bits) % 6)
    chars = [chr(g.n + _GRAPH6_OFFSET)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + _GRAPH6_OFFSET))
    return "".join(chars)


def parse_graph6(line: str | bytes) -> Graph:
    """Decode one short-form graph6 string (``n <= 62``)."""
    if isinstance(line, bytes):
        line = line.decode("ascii", errors="surrogateescape")
    if line.endswith("\n"):
        line = line[:-1]
    if line.endswith("\r"):
        line = line[:-1]
    if line.startswith(">>graph6<<"):
        raise Graph6Error("graph6 header is not accepted inline", 0)
    if not line:
        raise Graph6Error("empty graph6 string", 0)
    codes = [ord(c) for c in line]
    for pos, c in enumerate(codes):
        if not 63 <= c <= 126:
            raise Graph6Error(f"character {c!r} outside [63, 126]", pos)
    n = codes[0] - _GRAPH6_OFFSET
    if n == 63:
        raise Graph6Error("long-form graph6 (n > 62) is not supported", 0)
    if n == 0:
        raise Graph6Error("graph with zero vertices", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(codes) < 1 + nbytes:
        raise Graph6Error(f"truncated: expected {1 + nbytes} bytes, got {len(codes)}", len(codes))
    if len(codes) > 1 + nbytes:
        raise Graph6Error("trailing garbage after graph6 data", 1 + nbytes)
    edges = []
    pairs = _upper_pairs(n)
    for k in range(nbytes):
        val = codes[1 + k] - _GRAPH6_OFFSET
        for shift in range(5, -1, -1):
            idx = 6 * k + (5 - shift)
            bit = (val >> shift) & 1
            if idx >= nbits:
                if bit:
                    raise Graph6Error("nonzero padding bits", 1 + k)
                continue
            pair = next(pairs)
            if bit:
                edges.append(pair)
    return Graph(n, edges)


def read_graph6_file(path) -> list[Graph]:
    graphs = []
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh):
            raw = raw.rstrip(b"\r\n")
            if raw.startswith(b">>graph6<<"):
                raw = raw[10:]
            if not raw:
                continue
            try:
                graphs.append(parse_graph6(raw))
            except Graph6Error as exc:
                raise Graph6Error(f"line {lineno + 1}: {exc}", exc.offset) from None
    return graphs


# ---------------------------------------------------------------- canonical form


@dataclass(frozen=True)
class CanonicalForm:
    n: int
    bitstring: str


_WEIGHT_CACHE_MAX_N = 8


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


@lru_cache(maxsize=None)
def _pair_weights(n: int) -> np.ndarray:
    """``w[i, j]``: value of the bit at pair ``(min, max)`` in the canonical code, MSB first."""
    pairs = list(_upper_pairs(n))
    w = np.zeros((n, n), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        w[i, j] = w[j, i] = 1 << (len(pairs) - 1 - k)
    return w


@lru_cache(maxsize=None)
def _weight_table(n: int) -> np.ndarray:
    """Row ``s``: code contribution of source pair ``s`` under every relabeling."""
    perms, w = _permutations(n), _pair_weights(n)
    return np.stack([w[perms[:, i], perms[:, j]] for i, j in _upper_pairs(n)])


def canonical_form(g: Graph) -> CanonicalForm:
    """Lexicographically minimal upper-triangle bitstring over all n! relabelings.

    A relabeling sends edge ``(a, b)`` to ``(perm[a], perm[b])``; its code is
    the sum of the weights of the relabeled pairs, and the canonical form is the
    minimum code. Exhaustive, so only graphs with at most 10 vertices are
    accepted.
    """
    n = g.n
    if n > MAX_CANONICAL_VERTICES:
        raise ValueError(f"canonical_form supports n <= {MAX_CANONICAL_VERTICES}, got {n}")
    m = n * (n - 1) // 2
    if not g.edges:
        return CanonicalForm(n, "0" * m)
    if n <= _WEIGHT_CACHE_MAX_N:
        pair_pos = {pair: k for k, pair in enumerate(_upper_pairs(n))}
        rows = [pair_pos[e] for e in g.edges]
        best = int(_weight_table(n)[rows].sum(axis=0).min())
    else:
        perms, w = _permutations(n), _pair_weights(n)
        best = None
        chunk = 1 << 18
        for start in range(0, perms.shape[0], chunk):
            block = perms[start:start + chunk]
            code = np.zeros(block.shape[0], dtype=np.int64)
            for a, b in g.edges:
                code += w[block[:, a], block[:, b]]
            low = int(code.min())
            best = low if best is None else min(best, low)
    return CanonicalForm(n, format(best, f"0{m}b"))
