"""Write every non-isomorphic graph on n vertices (optionally connected only) as graph6.

Graphs are grown one edge at a time from the empty graph; duplicates are
removed with a canonical form that restricts the relabeling search to orderings
consistent with colour refinement. Known counts for n = 8: 12346 graphs,
11117 connected.

    python scripts/make_graph_corpus.py 8 --connected > tests/data/graph8c.g6
"""

import argparse
import itertools
import sys

import numpy as np

from qaoa_phaseops.graph import Graph, connected, encode_graph6


def refine(adj: np.ndarray) -> list[int]:
    n = adj.shape[0]
    colors = adj.sum(axis=1).tolist()
    while True:
        sig = [(colors[v], tuple(sorted(colors[w] for w in np.flatnonzero(adj[v])))) for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_key(adj: np.ndarray) -> bytes:
    n = adj.shape[0]
    colors = refine(adj)
    cells = [[v for v in range(n) if colors[v] == c] for c in sorted(set(colors))]
    orders = np.array(
        [sum(choice, ()) for choice in itertools.product(*(itertools.permutations(c) for c in cells))]
    )
    iu, ju = np.triu_indices(n, 1)
    bits = adj[orders[:, iu], orders[:, ju]]
    packed = np.packbits(bits, axis=1)
    best = min(row.tobytes() for row in packed) if len(packed) < 64 else _min_rows(packed)
    return best


def _min_rows(packed: np.ndarray) -> bytes:
    order = np.lexsort(packed.T[::-1])
    return packed[order[0]].tobytes()


def all_graphs(n: int):
    empty = np.zeros((n, n), dtype=bool)
    level = {canonical_key(empty): empty}
    yield empty
    pairs = list(zip(*np.triu_indices(n, 1)))
    for _ in range(len(pairs)):
        nxt = {}
        for adj in level.values():
            for i, j in pairs:
                if adj[i, j]:
                    continue
                a = adj.copy()
                a[i, j] = a[j, i] = True
                key = canonical_key(a)
                if key not in nxt:
                    nxt[key] = a
        for key in sorted(nxt):
            yield nxt[key]
        level = nxt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("n", type=int)
    ap.add_argument("--connected", action="store_true")
    args = ap.parse_args()
    count = 0
    for adj in all_graphs(args.n):
        iu, ju = np.nonzero(np.triu(adj, 1))
        g = Graph(args.n, zip(iu.tolist(), ju.tolist()))
        if args.connected and not connected(g):
            continue
        sys.stdout.write(encode_graph6(g) + "\n")
        count += 1
    print(f"{count} graphs", file=sys.stderr)


if __name__ == "__main__":
    main()
