"""Brute-force reference implementations used to cross-check the package.

Each oracle works from first principles and shares no code with the module
it checks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def unbroken_by_thresholds(A, B, n):
    """Search a fine grid of reals 1 < b < a < n+1 with A = [1,a) and B = (b,n+1]."""
    A, B = set(A), set(B)
    idx = range(1, n + 2)
    # only the position of a threshold relative to the integers matters,
    # so a grid of quarter steps reaches every case
    grid = [Fraction(k, 4) for k in range(5, 4 * (n + 1))]
    a_ok = [a for a in grid if A == {i for i in idx if i < a}]
    b_ok = [b for b in grid if B == {i for i in idx if i > b}]
    return any(b < a for a in a_ok for b in b_ok)


def arrangement_vertices(h, levels1, levels2):
    """Intersect every pair of lines (cuts and sides) exactly; drop corners."""
    # a line is (coefficients, value) meaning coeffs . (e1,e2,e3) == value
    lines = [((1, 0, 0), c) for c in set(levels1)] + [((0, 1, 0), d) for d in set(levels2)]
    sides = [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0)]
    found = set()
    for (u, a), (v, b) in itertools.combinations(lines + sides, 2):
        m = np.array([u, v, (1, 1, 1)], dtype=object)
        rhs = [Fraction(a), Fraction(b), Fraction(h)]
        try:
            sol = _solve3(m, rhs)
        except ZeroDivisionError:
            continue
        if any(x < 0 for x in sol) or any(x.denominator != 1 for x in sol):
            continue
        p = tuple(int(x) for x in sol)
        if sum(1 for x in p if x) == 1:
            continue
        found.add(p)
    return found


def _solve3(m, rhs):
    """Cramer's rule over the rationals."""
    def det(a):
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    rows = [[Fraction(int(x)) for x in r] for r in m]
    d = det(rows)
    if d == 0:
        raise ZeroDivisionError
    out = []
    for col in range(3):
        mod = [r[:] for r in rows]
        for i in range(3):
            mod[i][col] = rhs[i]
        out.append(det(mod) / d)
    return out


def fibre_levels(A, B, n, g):
    """Component levels straight from the valuations: type-1 by index, type-2 by index."""
    h = sum(g)
    t1 = {}
    for k in sorted(A):
        t1[k] = sum(g[i - 1] for i in range(1, k + 1))
    t2 = {}
    for idx in sorted(B):
        j = n + 2 - idx
        t2[j] = sum(g[i - 1] for i in range(idx, n + 2))
    return h, t1, t2


def stabilizer_rank_union_find(n, J, constraints):
    """Kernel dimension when every equation says a_i = a_j or a_k = 0.

    ``constraints`` lists the factor indices forced to vanish by support
    points; base directions outside J tie neighbouring factors together.
    """
    parent = list(range(n + 2))  # 0 and n+1 stand for the zero value

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    union(0, n + 1)
    for i in range(1, n + 2):
        if i not in J:
            union(i - 1, i)
    for k in constraints:
        union(k, 0)
    ground = find(0)
    return len({find(k) for k in range(1, n + 1) if find(k) != ground})


def numeric_kernel_dim(rows, n):
    if not rows:
        return n
    return n - int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


def adjacent_by_geometry(vertices, v0, h, lines):
    """Vertices joined to v0 by a segment of some line containing no other vertex."""
    out = set()
    for axis, value in lines:
        on = [v for v in vertices if v[axis] == value]
        if v0 not in on:
            continue
        for w in on:
            if w == v0:
                continue
            lo, hi = sorted((v0, w))
            between = [u for u in on if u not in (v0, w) and
                       all(min(a, b) <= c <= max(a, b) for a, b, c in zip(v0, w, u))]
            if not between:
                out.add(w)
    return out
