import itertools

import pytest
from hypothesis import given

from conftest import graphs
from qaoa_phaseops.graph import Graph, complete_graph, star_graph
from qaoa_phaseops.maxcut import cut_value, max_cut


def brute_max_cut(g: Graph) -> int:
    best = 0
    for bits in itertools.product((0, 1), repeat=g.n):
        cut = 0
        for u in range(g.n):
            for v in range(u + 1, g.n):
                if (u, v) in g.edges and bits[u] != bits[v]:
                    cut += 1
        best = max(best, cut)
    return best


def test_examples(eight):
    assert max_cut(eight).value == 7
    assert max_cut(complete_graph(3)).value == 2
    assert max_cut(star_graph(8)).value == 7


def test_eight_vertex_partition(eight):
    side = [1 if v in (6, 7) else 0 for v in range(8)]
    assert cut_value(eight, side) == 7
    res = max_cut(eight)
    assert cut_value(eight, res.partition) == 7


def test_cut_value_examples():
    k3 = complete_graph(3)
    assert cut_value(k3, [0, 0, 0]) == 0
    assert cut_value(k3, [0, 0, 1]) == 2
    with pytest.raises(ValueError):
        cut_value(k3, [0, 1])


def test_edgeless():
    res = max_cut(Graph(4))
    assert res.value == 0


@given(graphs(max_n=8))
def test_matches_brute_force(g):
    res = max_cut(g)
    assert res.value == brute_max_cut(g)
    assert cut_value(g, res.partition) == res.value
    assert res.value >= len(g.edges) / 2


@given(graphs(max_n=8))
def test_complementing_partition_keeps_cut(g):
    res = max_cut(g)
    assert cut_value(g, [1 - b for b in res.partition]) == res.value
