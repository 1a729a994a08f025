from fractions import Fraction

import pytest
from conftest import brute_polytope_vertices, rand_frac, rand_vec, rng

from aoulab.errors import ShapeError
from aoulab.linalg import dot, vec
from aoulab.lp import EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, solve_lp, verify_outcome


def test_max_with_upper_bound_dual_is_one():
    out = solve_lp([1], [[1]], [1], [LE], maximize=True)
    assert out.status == OPTIMAL
    assert out.primal == vec([1])
    assert out.value == 1
    assert out.dual_certificate == vec([1])


def test_infeasible_pair_farkas_witness():
    out = solve_lp([0], [[1], [1]], [1, 0], [GE, LE])
    assert out.status == INFEASIBLE
    assert out.dual_certificate == vec([1, 1])


def test_order_norm_shaped_lp():
    # minimize r with r(1,1) - (3,-2) >= 0 and r(1,1) + (3,-2) >= 0;
    # oracle: max |coordinate| of (3,-2).
    target = vec([3, -2])
    rows = [[1], [1], [1], [1]]
    rhs = [target[0], target[1], -target[0], -target[1]]
    out = solve_lp([1], rows, rhs, [GE] * 4)
    assert out.status == OPTIMAL
    assert out.value == max(abs(x) for x in target) == 3


def test_unbounded_with_ray():
    out = solve_lp([1], [[1]], [0], [GE], maximize=True)
    assert out.status == UNBOUNDED
    assert out.ray is not None and out.ray[0] > 0


def test_equality_rows_and_bounds():
    # min x + y s.t. x + y + z = 3, z <= 1, x,y >= 0
    out = solve_lp(
        [1, 1, 0],
        [[1, 1, 1]],
        [3],
        [EQ],
        bounds=[(0, None), (0, None), (None, 1)],
    )
    assert out.status == OPTIMAL
    assert out.value == 2
    assert len(out.system.rows) == 4  # one user row + three bound rows


def test_shape_errors():
    with pytest.raises(ShapeError):
        solve_lp([1, 2], [[1]], [0], [GE])
    with pytest.raises(ShapeError):
        solve_lp([1], [[1]], [0], ["<"])


def test_randomized_against_vertex_oracle():
    # Bounded random LPs: simplex optimum must match brute-force vertex scan.
    r = rng(20260814)
    for trial in range(60):
        n = r.randint(1, 3)
        rows = [rand_vec(r, n) for _ in range(r.randint(n + 1, 6))]
        rhs = [rand_frac(r) for _ in rows]
        # add a box so the region is bounded
        for j in range(n):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            rows += [vec(e)]
            rhs += [Fraction(-5)]
            rows += [vec([-x for x in e])]
            rhs += [Fraction(-5)]
        c = rand_vec(r, n)
        out = solve_lp(c, rows, rhs, [GE] * len(rows))
        verts = brute_polytope_vertices(rows, rhs, n)
        if out.status == INFEASIBLE:
            assert not verts
            continue
        assert out.status == OPTIMAL
        assert verts
        assert out.value == min(dot(c, v) for v in verts)
        verify_outcome(out)


def test_random_infeasible_certificates_verify():
    r = rng(7)
    found = 0
    for trial in range(80):
        n = r.randint(1, 3)
        rows = [rand_vec(r, n) for _ in range(6)]
        rhs = [rand_frac(r, lo=1, hi=5) for _ in rows]
        senses = [r.choice([GE, LE, EQ]) for _ in rows]
        out = solve_lp([0] * n, rows, rhs, senses)
        if out.status == INFEASIBLE:
            found += 1
            verify_outcome(out)
    assert found > 5
