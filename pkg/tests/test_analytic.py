import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import angles, graphs, leaf_cycle
from qaoa_phaseops.analytic import (
    Angles1, P1Objective, PhaseEdgeStats, edge_expectation, edge_stats, total_expectation,
)
from qaoa_phaseops.graph import Graph, complete_graph, star_graph

stats_st = st.builds(
    lambda chi, d, e, f: PhaseEdgeStats(chi, d, e, min(f, d, e)),
    st.integers(0, 1), st.integers(0, 6), st.integers(0, 6), st.integers(0, 6),
)


def test_edge_stats_examples(eight_matching):
    assert edge_stats((0, 7), eight_matching) == PhaseEdgeStats(1, 0, 0, 0)
    assert edge_stats((0, 3), eight_matching) == PhaseEdgeStats(0, 1, 1, 0)
    assert edge_stats((0, 1), complete_graph(3)) == PhaseEdgeStats(1, 1, 1, 1)
    with pytest.raises(ValueError):
        edge_stats((0, 9), eight_matching)


def test_edge_expectation_examples():
    assert edge_expectation(PhaseEdgeStats(1, 0, 0, 0), Angles1(math.pi / 2, math.pi / 8)) == pytest.approx(1.0, abs=1e-15)


@given(st.integers(0, 6), st.integers(0, 6), angles)
def test_no_membership_no_triangle_is_half(d, e, ab):
    assert edge_expectation(PhaseEdgeStats(0, d, e, 0), Angles1(*ab)) == pytest.approx(0.5, abs=1e-15)


@given(stats_st, st.floats(0, math.pi))
def test_zero_gamma_is_half(stats, beta):
    assert edge_expectation(stats, Angles1(0.0, beta)) == pytest.approx(0.5, abs=1e-15)


@given(stats_st, angles)
def test_periodicity_and_range(stats, ab):
    g, b = ab
    v = edge_expectation(stats, Angles1(g, b))
    assert -1e-12 <= v <= 1 + 1e-12
    assert edge_expectation(stats, Angles1(g + 2 * math.pi, b)) == pytest.approx(v, abs=1e-9)
    assert edge_expectation(stats, Angles1(g, b + math.pi)) == pytest.approx(v, abs=1e-9)


def test_total_examples(eight, eight_matching):
    assert total_expectation(eight, eight_matching, Angles1(math.pi / 2, math.pi / 8)) == pytest.approx(7.0, abs=1e-12)
    with pytest.raises(ValueError):
        total_expectation(eight, Graph(7), Angles1(0, 0))


@pytest.mark.parametrize("n", range(4, 9))
@given(ab=angles)
def test_star_with_leaf_cycle_is_half_edges(n, ab):
    assert total_expectation(star_graph(n), leaf_cycle(n), Angles1(*ab)) == pytest.approx((n - 1) / 2, abs=1e-12)


@given(graphs(min_n=2, max_n=8), graphs(min_n=2, max_n=8), st.lists(angles, min_size=1, max_size=5))
def test_vectorized_objective_matches_scalar(g, h, pts):
    if g.n != h.n:
        return
    obj = P1Objective(g, h)
    gam = np.array([p[0] for p in pts])
    bet = np.array([p[1] for p in pts])
    want = [total_expectation(g, h, Angles1(*p)) for p in pts]
    np.testing.assert_allclose(obj(gam, bet), want, atol=1e-12)


# symbolic derivative of the per-edge closed form, summed over edges
_G, _B = sympy.symbols("g b", real=True)


def _symbolic_total(cost: Graph, op: Graph):
    expr = 0
    for e in cost.sorted_edges():
        s = edge_stats(e, op)
        expr += sympy.Rational(1, 2) + sympy.Rational(s.chi, 4) * sympy.sin(4 * _B) * sympy.sin(_G) * (
            sympy.cos(_G) ** s.d + sympy.cos(_G) ** s.e
        ) - sympy.Rational(1, 4) * sympy.sin(2 * _B) ** 2 * sympy.cos(_G) ** (s.d + s.e - 2 * s.f) * (
            1 - sympy.cos(2 * _G) ** s.f
        )
    return expr


@settings(max_examples=15, deadline=None)
@given(graphs(min_n=3, max_n=7), graphs(min_n=3, max_n=7), angles)
def test_gradient_matches_symbolic(g, h, ab):
    if g.n != h.n:
        return
    expr = _symbolic_total(g, h)
    dg = sympy.lambdify((_G, _B), sympy.diff(expr, _G))
    db = sympy.lambdify((_G, _B), sympy.diff(expr, _B))
    _, og, ob = P1Objective(g, h).value_and_grad(np.array([ab[0]]), np.array([ab[1]]))
    assert og[0] == pytest.approx(dg(*ab), abs=1e-9)
    assert ob[0] == pytest.approx(db(*ab), abs=1e-9)
