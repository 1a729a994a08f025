from fractions import Fraction

import pytest
from conftest import brute_extreme_rays, brute_polytope_vertices, rand_frac, rand_vec, rng

from aoulab.dd import dd_pair, extreme_rays_hrep, generators_from_hrep, hrep_from_generators, polytope_vertices
from aoulab.errors import InputError, NotPointedError
from aoulab.linalg import dot, integerize, vec


def test_orthant_rays():
    lin, rays = dd_pair([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert lin == []
    assert sorted(rays) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_abs_value_cone():
    # {a0 >= |a1|} has the two diagonal rays
    lin, rays = dd_pair([[1, 1], [1, -1]], 2)
    assert lin == []
    assert sorted(rays) == [(1, -1), (1, 1)]


def test_ell1_cone_dim3():
    # {a0 >= |a1| + |a2|}: four extreme rays
    rows = [[1, s1, s2] for s1 in (1, -1) for s2 in (1, -1)]
    lin, rays = dd_pair(rows, 3)
    assert lin == []
    assert sorted(rays) == [(1, -1, 0), (1, 0, -1), (1, 0, 1), (1, 1, 0)]


def test_halfplane_lineality():
    lin, rays = dd_pair([[1, 0]], 2)
    assert lin == [(0, 1)]
    assert rays == [(1, 0)]
    with pytest.raises(NotPointedError):
        extreme_rays_hrep([[1, 0]], 2)


def test_full_space_and_origin():
    lin, rays = dd_pair([], 2)
    assert len(lin) == 2 and rays == []
    lin, rays = dd_pair([[1, 0], [-1, 0], [0, 1], [0, -1]], 2)
    assert lin == [] and rays == []


def test_duplicate_and_scaled_rows_ignored():
    lin, rays = dd_pair([[1, 1], ["1/2", "1/2"], [2, 2], [1, -1]], 2)
    assert sorted(rays) == [(1, -1), (1, 1)]


def test_roundtrip_hrep_vrep():
    rows = [[1, 1, 1], [1, -1, 0], [0, 1, -1], [2, 0, 1]]
    gens = generators_from_hrep(rows, 3)
    back = hrep_from_generators(gens, 3)
    gens2 = generators_from_hrep(back, 3)
    assert sorted(integerize(g) for g in gens) == sorted(integerize(g) for g in gens2)


def test_random_cones_match_brute_force():
    r = rng(99)
    for trial in range(40):
        dim = r.randint(2, 4)
        rows = [rand_vec(r, dim) for _ in range(r.randint(dim, 7))]
        lin, rays = dd_pair(rows, dim)
        if lin:
            continue  # oracle assumes pointed
        expected = brute_extreme_rays([vec(x) for x in rows], dim)
        assert set(rays) == expected


def test_rays_satisfy_rows_exactly():
    r = rng(5)
    for trial in range(30):
        dim = r.randint(2, 5)
        rows = [rand_vec(r, dim) for _ in range(6)]
        lin, rays = dd_pair(rows, dim)
        for ray in rays:
            assert all(dot(vec(row), vec(ray)) >= 0 for row in rows)
        for l in lin:
            assert all(dot(vec(row), vec(l)) == 0 for row in rows)


def test_polytope_vertices_square():
    rows = [[1, 0], [-1, 0], [0, 1], [0, -1]]
    rhs = [0, -1, 0, -1]
    vs = polytope_vertices(rows, [Fraction(x) for x in rhs], 2)
    assert set(vs) == {vec([0, 0]), vec([0, 1]), vec([1, 0]), vec([1, 1])}


def test_polytope_vertices_random_vs_oracle():
    r = rng(123)
    for trial in range(25):
        dim = r.randint(1, 3)
        rows = [rand_vec(r, dim) for _ in range(r.randint(dim + 1, 6))]
        rhs = [rand_frac(r) for _ in rows]
        for j in range(dim):
            e = [Fraction(0)] * dim
            e[j] = Fraction(1)
            rows += [vec(e), vec([-x for x in e])]
            rhs += [Fraction(-4), Fraction(-4)]
        vs = polytope_vertices(rows, rhs, dim)
        assert set(vs) == brute_polytope_vertices(rows, rhs, dim)


def test_polytope_unbounded_reported():
    with pytest.raises(InputError):
        polytope_vertices([vec([1, 0])], [Fraction(0)], 2)
