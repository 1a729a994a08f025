"""Double description: exact conversion between halfspace and generator form.

dd_pair is the workhorse: given rows a_i it returns a lineality basis L and
extreme rays R with {x : a_i . x >= 0 for all i} = span(L) + cone(R), all as
coprime integer tuples. The incremental algorithm starts from the full space
(lineality = standard basis) and inserts halfspaces in a deterministic order
(normalized, deduplicated, lexicographically sorted), so outputs are stable
across runs. Adjacency during ray splitting uses the combinatorial test on
active sets, held as bitmasks over processed rows.

All arithmetic is integer: inputs are scaled to coprime integers and the
update rules clear denominators, which keeps this fast without giving up
exactness. New rays have no accidental zero activities because the two
parents sit strictly on opposite sides of the inserted hyperplane and agree
in sign everywhere else, so the bitmask bookkeeping is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InputError, NotPointedError, ShapeError
from .linalg import Vec, integerize

IntVec = tuple[int, ...]


def _idot(a: IntVec, b: IntVec) -> int:
    return sum(x * y for x, y in zip(a, b))


def _reduce(v: Sequence[int]) -> IntVec:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def dd_pair(halfspaces: Sequence[Sequence], dim: int) -> tuple[list[IntVec], list[IntVec]]:
    """Minimal (lineality basis, extreme rays) of {x : h . x >= 0 for all h}."""
    rows: list[IntVec] = []
    seen = set()
    for h in halfspaces:
        hv = integerize(h)
        if len(hv) != dim:
            raise ShapeError(f"halfspace length {len(hv)} != dim {dim}")
        if all(x == 0 for x in hv) or hv in seen:
            continue
        seen.add(hv)
        rows.append(hv)
    rows.sort()

    lineality: list[IntVec] = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    rays: list[IntVec] = []
    active: list[int] = []  # tight-row bitmask per ray, over processed rows

    for idx, a in enumerate(rows):
        bit = 1 << idx
        pivot_at = None
        for i, b in enumerate(lineality):
            if _idot(a, b) != 0:
                pivot_at = i
                break
        if pivot_at is not None:
            # A lineality direction crosses the hyperplane: it becomes a ray,
            # everything else is projected along it onto {a . x = 0}.
            b0 = lineality.pop(pivot_at)
            pa = _idot(a, b0)
            if pa < 0:
                b0 = tuple(-x for x in b0)
                pa = -pa
            lineality = [
                _reduce(tuple(pa * x - _idot(a, b) * y for x, y in zip(b, b0))) for b in lineality
            ]
            rays = [
                _reduce(tuple(pa * x - _idot(a, r) * y for x, y in zip(r, b0))) for r in rays
            ]
            # projected rays land on the new hyperplane; b0 was orthogonal to
            # every earlier row, strictly positive on this one
            active = [mask | bit for mask in active]
            rays.append(b0)
            active.append(bit - 1)
            continue

        vals = [_idot(a, r) for r in rays]
        minus = [i for i, v in enumerate(vals) if v < 0]
        if not minus:
            for i, v in enumerate(vals):
                if v == 0:
                    active[i] |= bit
            continue
        plus = [i for i, v in enumerate(vals) if v > 0]
        new_rays: list[IntVec] = []
        new_active: list[int] = []
        for p in plus:
            for q in minus:
                z = active[p] & active[q]
                adjacent = True
                for k in range(len(rays)):
                    if k != p and k != q and (active[k] & z) == z:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = tuple(vals[p] * x - vals[q] * y for x, y in zip(rays[q], rays[p]))
                new_rays.append(_reduce(comb))
                new_active.append(z | bit)
        kept_rays = []
        kept_active = []
        for i, v in enumerate(vals):
            if v > 0:
                kept_rays.append(rays[i])
                kept_active.append(active[i])
            elif v == 0:
                kept_rays.append(rays[i])
                kept_active.append(active[i] | bit)
        rays = kept_rays + new_rays
        active = kept_active + new_active

    order = sorted(range(len(rays)), key=lambda i: rays[i])
    return sorted(lineality), [rays[i] for i in order]


def _as_vecs(int_vecs: Sequence[IntVec]) -> list[Vec]:
    return [tuple(Fraction(x) for x in v) for v in int_vecs]


def generators_from_hrep(rows: Sequence[Sequence], dim: int) -> list[Vec]:
    """Generators (lines as +- pairs) of {x : row . x >= 0 for all rows}."""
    lin, rays = dd_pair(rows, dim)
    gens = list(rays)
    for l in lin:
        gens.append(l)
        gens.append(tuple(-x for x in l))
    return _as_vecs(gens)


def hrep_from_generators(gens: Sequence[Sequence], dim: int) -> list[Vec]:
    """Halfspace rows of cone(gens); equality facets appear as +- row pairs."""
    lin, rays = dd_pair(gens, dim)  # this is the dual cone of cone(gens)
    rows = list(rays)
    for l in lin:
        rows.append(l)
        rows.append(tuple(-x for x in l))
    return _as_vecs(rows)


def extreme_rays_hrep(rows: Sequence[Sequence], dim: int) -> list[Vec]:
    """Extreme rays of a pointed halfspace cone; error when lineality exists."""
    lin, rays = dd_pair(rows, dim)
    if lin:
        raise NotPointedError(
            f"cone has lineality of dimension {len(lin)}", lineality=_as_vecs(lin)
        )
    return _as_vecs(rays)


def polytope_vertices(
    rows: Sequence[Sequence], rhs: Sequence, dim: int
) -> list[Vec]:
    """Vertices of the polytope {x : row_i . x >= rhs_i}, by homogenization.

    Raises InputError when the set is unbounded (a recession direction is
    attached as the certificate). The empty polytope returns [].
    """
    hom = [integerize(list(r) + [-b]) for r, b in zip(rows, rhs)]
    hom.append(tuple([0] * dim + [1]))
    lin, rays = dd_pair(hom, dim + 1)
    if lin:
        raise InputError("unbounded feasible set (contains a line)", certificate=_as_vecs(lin))
    verts: list[Vec] = []
    for r in rays:
        t = r[-1]
        if t == 0:
            if all(x == 0 for x in r):
                continue
            raise InputError(
                "unbounded feasible set (recession direction)",
                certificate=tuple(Fraction(x) for x in r[:-1]),
            )
        verts.append(tuple(Fraction(x, t) for x in r[:-1]))
    return sorted(set(verts))
