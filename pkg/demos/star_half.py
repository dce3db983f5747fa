"""
Stars stuck at one half
=======================

Give a star graph a phase operator that only links its leaves in a cycle.
No cost edge is in the operator and no cost edge closes a triangle with
it, so every edge contributes exactly 1/2 whatever the angles.
"""

import numpy as np

from qaoa_phaseops import AngleSchedule, Graph, max_cut, qaoa_expectation

for n in range(4, 9):
    center = n - 1
    star = Graph(n, [(v, center) for v in range(center)])
    ring = Graph(n, [(i, (i + 1) % center) for i in range(center)])
    values = [
        qaoa_expectation(star, ring, AngleSchedule([g], [b]))
        for g in np.linspace(0, 2 * np.pi, 7)
        for b in np.linspace(0, np.pi, 7)
    ]
    print(f"n={n}: expectation in [{min(values):.12f}, {max(values):.12f}], max cut {max_cut(star).value}")
