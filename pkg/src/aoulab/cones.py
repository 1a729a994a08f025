"""Convex cones with certified membership.

A Cone is either polyhedral, given by generators (V-rep) or by inequality
rows with optional strict flags (H-rep), or the cone of positive
semidefinite symmetric n x n matrices stored as packed upper-triangle
vectors (kind sym_psd). Polyhedral representation conversions are computed
on demand via double description and cached write-once; sym_psd cones refuse
conversion with a typed error and delegate membership to the exact LDL^T
test.

Every membership answer is a Certificate that re-verifies by substitution:
a conic decomposition over named generators, a violated inequality row, a
separating functional that is nonnegative on all generators and negative on
the query, or an exact PSD factorization / negative direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import dd
from .errors import (
    InputError,
    InvariantViolation,
    NotPointedError,
    PolyhedralRequired,
    ShapeError,
    StrictConeError,
)
from .linalg import (
    Matrix,
    Vec,
    dot,
    integerize,
    is_zero_vec,
    nullspace,
    rank,
    vec,
    zeros,
)
from .lp import EQ, GE, INFEASIBLE, OPTIMAL, solve_lp
from .psd import ldlt_psd

POLYHEDRAL = "polyhedral"
SYM_PSD = "sym_psd"


def sym_dim(n: int) -> int:
    return n * (n + 1) // 2


def pack_sym(m: Matrix) -> Vec:
    """Upper triangle of a symmetric matrix, row by row: (i,j) with i <= j."""
    if m.rows != m.cols:
        raise ShapeError("pack_sym: square matrix required")
    for i in range(m.rows):
        for j in range(i):
            if m.data[i][j] != m.data[j][i]:
                raise ShapeError("pack_sym: not symmetric")
    return tuple(m.data[i][j] for i in range(m.rows) for j in range(i, m.rows))


def unpack_sym(v: Sequence[Fraction], n: int) -> Matrix:
    if len(v) != sym_dim(n):
        raise ShapeError(f"unpack_sym: length {len(v)} != {sym_dim(n)}")
    rows = [[Fraction(0)] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = v[k]
            k += 1
    return Matrix.from_rows(rows)


@dataclass(eq=False)
class Cone:
    """dim-dimensional cone; exactly one representation is primal at build
    time, the other is derived lazily and cached."""

    dim: int
    generators: tuple[Vec, ...] | None = None
    inequalities: tuple[Vec, ...] | None = None
    strict: tuple[bool, ...] | None = None
    kind: str = POLYHEDRAL
    psd_side: int | None = None
    _derived: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence], dim: int | None = None) -> "Cone":
        gv = tuple(vec(g) for g in gens)
        if dim is None:
            if not gv:
                raise ShapeError("dim required for an empty generator list")
            dim = len(gv[0])
        for g in gv:
            if len(g) != dim:
                raise ShapeError("generator length mismatch")
        return cls(dim=dim, generators=tuple(g for g in gv if not is_zero_vec(g)))

    @classmethod
    def from_inequalities(
        cls, rows: Sequence[Sequence], strict: Sequence[bool] | None = None, dim: int | None = None
    ) -> "Cone":
        rv = tuple(vec(r) for r in rows)
        if dim is None:
            if not rv:
                raise ShapeError("dim required for an empty row list")
            dim = len(rv[0])
        for r in rv:
            if len(r) != dim:
                raise ShapeError("row length mismatch")
        st = tuple(bool(s) for s in strict) if strict is not None else (False,) * len(rv)
        if len(st) != len(rv):
            raise ShapeError("strict flags must align with rows")
        return cls(dim=dim, inequalities=rv, strict=st)

    @classmethod
    def sym_psd(cls, n: int) -> "Cone":
        return cls(dim=sym_dim(n), kind=SYM_PSD, psd_side=n)

    # -- representation access ------------------------------------------

    @property
    def is_polyhedral(self) -> bool:
        return self.kind == POLYHEDRAL

    @property
    def has_strict_rows(self) -> bool:
        return bool(self.strict) and any(self.strict)

    def require_polyhedral(self, what: str) -> None:
        if not self.is_polyhedral:
            raise PolyhedralRequired(
                f"{what} is defined for polyhedral cones only; "
                f"sym_psd membership goes through the PSD oracles"
            )

    def vrep(self) -> tuple[Vec, ...]:
        """Generators; lines appear as +- pairs. Strict cones must be closed
        first (their generator form would silently change the set)."""
        self.require_polyhedral("generator representation")
        if self.generators is not None:
            return self.generators
        if self.has_strict_rows:
            raise StrictConeError("close_and_lineality first: cone has strict rows")
        if "vrep" not in self._derived:
            gens = dd.generators_from_hrep(self.inequalities, self.dim)
            self._derived["vrep"] = tuple(gens)
        return self._derived["vrep"]

    def hrep(self) -> tuple[Vec, ...]:
        """Closed inequality rows (no strict flags)."""
        self.require_polyhedral("inequality representation")
        if self.inequalities is not None:
            if self.has_strict_rows:
                raise StrictConeError("close_and_lineality first: cone has strict rows")
            return self.inequalities
        if "hrep" not in self._derived:
            rows = dd.hrep_from_generators(self.generators, self.dim)
            self._derived["hrep"] = tuple(rows)
        return self._derived["hrep"]


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable evidence for a membership verdict."""

    verdict: str  # "member" | "non_member"
    kind: str
    decomposition: tuple[tuple[int, Fraction], ...] | None = None
    witness: Vec | None = None
    payload: dict | None = None

    def verify(self, cone: Cone, v: Sequence[Fraction]) -> bool:
        v = vec(v)
        if self.kind == "conic_decomposition":
            gens = cone.vrep()
            total = zeros(cone.dim)
            for idx, coeff in self.decomposition:
                if coeff < 0:
                    return False
                total = tuple(t + coeff * g for t, g in zip(total, gens[idx]))
            return total == v
        if self.kind == "hrep_evaluation":
            return all(dot(row, v) >= 0 for row in cone.hrep())
        if self.kind == "separating_functional":
            w = self.witness
            if dot(w, v) >= 0:
                return False
            if cone.generators is not None:
                return all(dot(w, g) >= 0 for g in cone.generators)
            # w must be implied by the rows; a stored row index suffices
            if self.payload and "row_index" in self.payload:
                return vec(cone.hrep()[self.payload["row_index"]]) == w
            return all(dot(w, g) >= 0 for g in cone.vrep())
        if self.kind == "psd_factorization":
            res = ldlt_psd(unpack_sym(v, cone.psd_side))
            return res.is_psd
        if self.kind == "negative_direction":
            m = unpack_sym(v, cone.psd_side)
            x = self.witness
            return dot(x, m.apply(x)) < 0
        return False


def member(cone: Cone, v: Sequence[Fraction]) -> Certificate:
    """Certified membership test. Strict-flagged cones are rejected: their
    membership is only well defined after closing."""
    v = vec(v)
    if len(v) != cone.dim:
        raise ShapeError(f"vector length {len(v)} != cone dim {cone.dim}")
    if cone.kind == SYM_PSD:
        res = ldlt_psd(unpack_sym(v, cone.psd_side))
        if res.is_psd:
            return Certificate("member", "psd_factorization")
        return Certificate("non_member", "negative_direction", witness=res.witness)
    if cone.has_strict_rows:
        raise StrictConeError("membership undefined with strict rows; close the cone first")
    if cone.inequalities is not None:
        for i, row in enumerate(cone.inequalities):
            if dot(row, v) < 0:
                return Certificate(
                    "non_member", "separating_functional", witness=row, payload={"row_index": i}
                )
        return Certificate("member", "hrep_evaluation")
    gens = cone.vrep()
    if not gens:
        if is_zero_vec(v):
            return Certificate("member", "conic_decomposition", decomposition=())
        # the zero cone: any functional negative on v separates
        w = tuple(-x for x in v)
        return Certificate("non_member", "separating_functional", witness=w)
    cols = Matrix.from_rows(gens).transpose()
    out = solve_lp(
        zeros(len(gens)),
        [cols.row(i) for i in range(cone.dim)],
        v,
        [EQ] * cone.dim,
        bounds=[(0, None)] * len(gens),
    )
    if out.status == OPTIMAL:
        decomp = tuple(
            (j, out.primal[j]) for j in range(len(gens)) if out.primal[j] != 0
        )
        cert = Certificate("member", "conic_decomposition", decomposition=decomp)
    else:
        if out.status != INFEASIBLE:
            raise InvariantViolation("membership LP can only be optimal or infeasible")
        # Farkas multipliers on the equality rows give f with f.G <= 0,
        # f.v > 0; negate for the standard orientation.
        f = out.dual_certificate[: cone.dim]
        w = vec(integerize([-x for x in f]))
        cert = Certificate("non_member", "separating_functional", witness=w)
    if not cert.verify(cone, v):
        raise InvariantViolation("membership certificate failed re-verification")
    return cert


def dual(cone: Cone) -> Cone:
    """Dual cone under the standard pairing; a pure representation swap.

    The dual only sees the closure, so strict flags are dropped. sym_psd is
    self-dual and is returned as such.
    """
    if cone.kind == SYM_PSD:
        return cone
    if cone.generators is not None:
        return Cone.from_inequalities(cone.generators, dim=cone.dim)
    return Cone.from_generators(cone.inequalities, dim=cone.dim)


def close_and_lineality(cone: Cone) -> tuple[Cone, list[Vec]]:
    """Drop strict flags; return the closure and a basis of its lineality."""
    cone.require_polyhedral("close_and_lineality")
    if cone.inequalities is not None:
        closed = Cone.from_inequalities(cone.inequalities, dim=cone.dim)
        lin = nullspace(Matrix.from_rows(cone.inequalities)) if cone.inequalities else [
            v for v in Matrix.identity(cone.dim).data
        ]
        return closed, [vec(l) for l in lin]
    # V-rep cones are closed; lineality = common kernel of the facet rows
    rows = cone.hrep()
    if rows:
        lin = nullspace(Matrix.from_rows(rows))
    else:
        lin = [tuple(r) for r in Matrix.identity(cone.dim).data]
    return cone, [vec(l) for l in lin]


def extreme_rays(cone: Cone) -> list[Vec]:
    """Minimal generating set (coprime integer coordinates) of a pointed
    closed cone. Non-pointed input raises NotPointedError with the lineality
    basis attached rather than silently reducing."""
    cone.require_polyhedral("extreme_rays")
    if cone.has_strict_rows:
        raise StrictConeError("extreme_rays needs a closed cone; close it first")
    key = "extreme_rays"
    if key in cone._derived:
        return cone._derived[key]
    if cone.inequalities is not None:
        rays = dd.extreme_rays_hrep(cone.inequalities, cone.dim)
    else:
        gens = [vec(g) for g in dict.fromkeys(integerize(g) for g in cone.generators)]
        lin, dual_rays = dd.dd_pair(gens, cone.dim)
        span_rows = [list(r) for r in dual_rays] + [list(l) for l in lin]
        if span_rows:
            lineality = nullspace(Matrix.from_rows(span_rows))
        else:
            lineality = [tuple(r) for r in Matrix.identity(cone.dim).data]
        if lineality:
            raise NotPointedError(
                f"cone has lineality of dimension {len(lineality)}",
                lineality=[vec(l) for l in lineality],
            )
        rays = []
        for i, g in enumerate(gens):
            others = Cone.from_generators([h for j, h in enumerate(gens) if j != i] or [], dim=cone.dim)
            if member(others, g).verdict != "member":
                rays.append(g)
    rays = sorted(vec(integerize(r)) for r in rays)
    cone._derived[key] = rays
    return rays


def is_simplicial(cone: Cone) -> bool:
    """Pointed, closed, full-dimensional, with exactly dim extreme rays that
    are linearly independent. Validation failures raise typed errors."""
    cone.require_polyhedral("is_simplicial")
    if cone.has_strict_rows:
        raise StrictConeError("is_simplicial needs a closed cone")
    rays = extreme_rays(cone)  # raises NotPointedError when not pointed
    full = rank(Matrix.from_rows(rays)) == cone.dim if rays else cone.dim == 0
    if not full:
        raise InputError("is_simplicial requires a full-dimensional cone")
    return len(rays) == cone.dim


def image_cone(cone: Cone, m: Matrix) -> Cone:
    """Forward image of a closed polyhedral cone: map the generators, drop
    zero images. The result may be non-pointed; that is the caller's concern."""
    cone.require_polyhedral("image_cone")
    if m.cols != cone.dim:
        raise ShapeError(f"matrix expects dim {m.cols}, cone has {cone.dim}")
    images = [m.apply(g) for g in cone.vrep()]
    return Cone.from_generators([g for g in images if not is_zero_vec(g)], dim=m.rows)


def contains(outer: Cone, inner: Cone) -> bool:
    """outer >= inner for closed polyhedral cones, via generator membership."""
    for g in inner.vrep():
        if member(outer, g).verdict != "member":
            return False
    return True


def same_cone(a: Cone, b: Cone) -> bool:
    """Set equality of closed polyhedral cones: mutual membership of
    generators, checked both ways."""
    if a.dim != b.dim:
        raise ShapeError("same_cone: ambient dimensions differ")
    return contains(a, b) and contains(b, a)


def is_pointed(cone: Cone) -> bool:
    cone.require_polyhedral("is_pointed")
    if cone.inequalities is not None and not cone.has_strict_rows:
        # lineality of {x : Ax >= 0} is exactly ker A
        if not cone.inequalities:
            return cone.dim == 0
        return not nullspace(Matrix.from_rows(cone.inequalities))
    try:
        extreme_rays(cone)
    except NotPointedError:
        return False
    return True
