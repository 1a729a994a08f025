"""Shared test helpers: independent oracles the implementations are checked
against, plus deterministic random generators for the randomized suites.

The oracles deliberately use different algorithms from the package (subset
enumeration and characteristic polynomials instead of double description and
LDL^T) so agreement is meaningful.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from aoulab.linalg import Matrix, Vec, dot, integerize, nullspace, rank, solve, vec
from aoulab.maps import UnitalMap
from aoulab.spaces import extreme_states, linf


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def rand_frac(r: random.Random, lo: int = -4, hi: int = 4, den: int = 3) -> Fraction:
    return Fraction(r.randint(lo, hi), r.randint(1, den))


def rand_vec(r: random.Random, n: int, lo: int = -4, hi: int = 4, den: int = 3) -> Vec:
    return vec([rand_frac(r, lo, hi, den) for _ in range(n)])


def brute_extreme_rays(rows: list[Vec], dim: int) -> set[tuple[int, ...]]:
    """Extreme rays of a pointed cone {x : rows . x >= 0} by subset search.

    A direction is an extreme ray iff it is feasible and the rows tight at it
    have rank dim-1. Enumerate row subsets of size dim-1, take nullspaces.
    """
    out: set[tuple[int, ...]] = set()
    m = Matrix.from_rows(rows)
    for subset in combinations(range(len(rows)), dim - 1):
        sub = Matrix.from_rows([rows[i] for i in subset])
        ns = nullspace(sub)
        if len(ns) != 1:
            continue
        for cand in (ns[0], tuple(-x for x in ns[0])):
            if all(v >= 0 for v in m.apply(cand)):
                tight = [r for r in rows if dot(r, cand) == 0]
                if not tight:
                    continue
                if rank(Matrix.from_rows(tight)) == dim - 1:
                    out.add(integerize(cand))
    return out


def brute_polytope_vertices(rows: list[Vec], rhs: list[Fraction], dim: int) -> set[Vec]:
    """Vertices of {x : rows . x >= rhs} by basis enumeration."""
    out: set[Vec] = set()
    for subset in combinations(range(len(rows)), dim):
        sub = Matrix.from_rows([rows[i] for i in subset])
        if rank(sub) != dim:
            continue
        x = solve(sub, [rhs[i] for i in subset])
        if x is None:
            continue
        if all(dot(r, x) >= b for r, b in zip(rows, rhs)):
            out.add(x)
    return out


def charpoly(m: Matrix) -> list[Fraction]:
    """Coefficients of det(tI - A), ascending degree, by Faddeev-LeVerrier."""
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = Matrix.identity(n)
    a = m
    for k in range(1, n + 1):
        mk = a.compose(mk)
        c = -sum(mk.data[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        mk = Matrix.from_rows(
            [[mk.data[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        )
    return coeffs


def psd_by_descartes(m: Matrix) -> bool:
    """A symmetric matrix is PSD iff det(tI-A) has no sign change pattern
    admitting a negative root: with all-real roots, all roots >= 0 iff the
    coefficients of det(tI-A) alternate as (-1)^(n-k) c_k >= 0."""
    cs = charpoly(m)
    n = m.rows
    return all((-1) ** (n - k) * cs[k] >= 0 for k in range(n + 1))


def random_unital_into_linf(r, source, k, spread=4):
    """Random unital map into linf(k): rows are signed state mixtures with
    total weight one."""
    states = [s.functional for s in extreme_states(source)]
    rows = []
    for _ in range(k):
        w = [Fraction(r.randint(-spread, spread), r.randint(1, 3)) for _ in states]
        total = sum(w)
        if total == 0:
            w[0] += 1
            total = 1
        w = [x / total for x in w]
        row = vec([0] * source.dim)
        for c, s in zip(w, states):
            row = tuple(a + c * b for a, b in zip(row, s))
        rows.append(row)
    return UnitalMap(source, linf(k), Matrix.from_rows(rows))
