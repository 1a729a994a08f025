"""Ordered vector spaces with a distinguished order unit.

An AOUSpace bundles an ambient dimension, a cone and a unit vector. The
operations here are the order-theoretic core: validation (is the unit an
order unit, is the cone closed), Archimedeanization (close the cone, quotient
out the lineality of the closure), the order norm, extreme states, and the
evaluation embedding into linf over the extreme states.

Everything is exact. The order norm is computed twice, by LP against the
cone rows and as the maximum of |f(v)| over extreme states, and the two
routes must agree; disagreement is an internal error, never a rounding
question.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import dd
from .cones import Cone, close_and_lineality, dual, extreme_rays, image_cone, member
from .errors import (
    InputError,
    InvariantViolation,
    NotPointedError,
    PolyhedralRequired,
    ShapeError,
    SizeLimitError,
)
from .linalg import (
    Matrix,
    Vec,
    dot,
    inverse,
    is_zero_vec,
    nullspace,
    rank,
    unit_vec,
    vec,
    zeros,
)
from .lp import GE, INFEASIBLE, OPTIMAL, LPOutcome, solve_lp
from .psd import ldlt_psd
from .cones import SYM_PSD, pack_sym, unpack_sym


@dataclass(eq=False)
class AOUSpace:
    """(V, V+, e) with V = Q^dim in a fixed basis."""

    dim: int
    cone: Cone
    unit: Vec
    label: str = ""
    _derived: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.unit = vec(self.unit)
        if len(self.unit) != self.dim or self.cone.dim != self.dim:
            raise ShapeError("unit, cone and space dimensions must agree")
        if is_zero_vec(self.unit):
            raise InputError("the zero vector cannot be an order unit")

    def __repr__(self):
        return f"AOUSpace({self.label or self.dim})"


@dataclass(frozen=True)
class StateVector:
    """A positive functional normalized to 1 on the unit."""

    functional: Vec

    def __call__(self, v) -> Fraction:
        return dot(self.functional, vec(v))


@dataclass(frozen=True)
class ValidationReport:
    order_unit: bool
    archimedean: bool
    pointed: bool
    certificates: dict


def _norm_outcome(space: AOUSpace, v: Vec) -> LPOutcome:
    """min r subject to r*e + v and r*e - v in the closed cone, r >= 0."""
    rows = []
    rhs = []
    for a in space.cone.hrep():
        ae = dot(a, space.unit)
        av = dot(a, v)
        rows.append((ae,))
        rhs.append(-av)
        rows.append((ae,))
        rhs.append(av)
    return solve_lp((1,), rows, rhs, [GE] * len(rows), bounds=[(0, None)])


def validate(space: AOUSpace) -> ValidationReport:
    """Order-unit and Archimedean flags with failure certificates.

    The unit is an order unit when every basis direction is dominated by
    some multiple of it (one LP each); Archimedean means closed cone, which
    for polyhedral representations is the absence of strict rows.
    """
    certificates: dict = {}
    if space.cone.kind == SYM_PSD:
        n = space.cone.psd_side
        # unit must be positive definite: u - unit is an order unit of the
        # PSD cone iff it is invertible and PSD
        res = ldlt_psd(unpack_sym(space.unit, n))
        order_unit = res.is_psd and all(d != 0 for d in res.diag)
        if not order_unit:
            certificates["order_unit"] = res.witness if not res.is_psd else "singular unit"
        return ValidationReport(order_unit, True, True, certificates)

    archimedean = not space.cone.has_strict_rows
    closed, lineality = close_and_lineality(space.cone)
    pointed = not lineality
    probe = AOUSpace(space.dim, closed, space.unit, space.label)
    order_unit = True
    for i in range(space.dim):
        out = _norm_outcome(probe, unit_vec(i, space.dim))
        if out.status != OPTIMAL:
            order_unit = False
            certificates[f"order_unit_basis_{i}"] = out
            break
    return ValidationReport(order_unit, archimedean, pointed, certificates)


def archimedeanize(space: AOUSpace) -> tuple[AOUSpace, Matrix]:
    """Close the cone, then quotient by the lineality of the closure.

    Returns the Archimedean space and the quotient matrix q. For an already
    closed pointed cone this is the identity. The result must validate as
    Archimedean with a pointed cone; failure to do so is an internal error.
    """
    space.cone.require_polyhedral("archimedeanize")
    closed, lin = close_and_lineality(space.cone)
    if not lin:
        return AOUSpace(space.dim, closed, space.unit, space.label), Matrix.identity(space.dim)
    # complete the lineality basis to a full basis with standard vectors
    basis = [list(l) for l in lin]
    for i in range(space.dim):
        cand = basis + [list(unit_vec(i, space.dim))]
        if rank(Matrix.from_rows(cand)) == len(cand):
            basis = cand
    if len(basis) != space.dim:
        raise InvariantViolation("lineality completion failed to reach a basis")
    b = Matrix.from_rows(basis).transpose()  # columns: lineality then complement
    q = Matrix.from_rows(inverse(b).data[len(lin):])
    new_cone = image_cone(closed, q)
    new_unit = q.apply(space.unit)
    arch = AOUSpace(q.rows, new_cone, new_unit, label=f"{space.label}/arch" if space.label else "")
    report = validate(arch)
    if not (report.order_unit and report.archimedean and report.pointed):
        raise InvariantViolation("archimedeanization did not produce a valid AOU space")
    return arch, q


def order_norm(space: AOUSpace, v) -> Fraction:
    """inf{r : -r*e <= v <= r*e}, exact.

    Computed by LP over the cone rows and cross-checked against the maximum
    of |f(v)| over the extreme states; polyhedral cones only.
    """
    space.cone.require_polyhedral("order_norm")
    v = vec(v)
    if len(v) != space.dim:
        raise ShapeError(f"vector length {len(v)} != space dim {space.dim}")
    out = _norm_outcome(space, v)
    if out.status == INFEASIBLE:
        raise InputError(
            "vector is not dominated by the unit (not an order unit?)",
            certificate=out.dual_certificate,
        )
    r = out.value
    states = extreme_states(space)
    by_states = max((abs(s(v)) for s in states), default=Fraction(0))
    if r != by_states:
        raise InvariantViolation(f"order norm routes disagree: lp={r}, states={by_states}")
    return r


def extreme_states(space: AOUSpace) -> list[StateVector]:
    """Extreme rays of the dual cone, normalized to 1 on the unit.

    Every state is a convex combination of these, so state-quantified
    conditions reduce to this finite list.
    """
    if space.cone.kind == SYM_PSD:
        raise PolyhedralRequired(
            "sym_psd spaces have infinitely many extreme states; "
            "use the dedicated PSD oracles"
        )
    if "extreme_states" in space._derived:
        return space._derived["extreme_states"]
    try:
        rays = extreme_rays(dual(space.cone))
    except NotPointedError as e:
        raise InputError(
            "dual cone is not pointed (cone not full-dimensional); "
            "states do not separate points",
            certificate=e.lineality,
        ) from e
    states = []
    for f in rays:
        fe = dot(f, space.unit)
        if fe <= 0:
            raise InputError(
                f"dual ray {f} vanishes or is negative on the unit; not an interior unit",
                certificate=f,
            )
        states.append(StateVector(tuple(x / fe for x in f)))
    states.sort(key=lambda s: s.functional)
    space._derived["extreme_states"] = states
    return states


def kadison_embed(space: AOUSpace):
    """v |-> (f_1(v), ..., f_k(v)) over the extreme states, into linf(k).

    Unital, positive, and an order embedding; preserves the order norm by
    construction (both sides are the same maximum). Returns a UnitalMap.
    """
    from .maps import UnitalMap

    states = extreme_states(space)
    k = len(states)
    m = Matrix.from_rows([s.functional for s in states])
    target = linf(k)
    emb = UnitalMap(space, target, m)
    if not emb.unital or not emb.positive:
        raise InvariantViolation("evaluation embedding must be unital and positive")
    return emb


# -- interval and ball geometry ------------------------------------------


def order_interval_vertices(space: AOUSpace) -> list[Vec]:
    """Vertices of [0, e] = {v : v in cone, e - v in cone}."""
    key = "interval_vertices"
    if key not in space._derived:
        rows, rhs = [], []
        for a in space.cone.hrep():
            rows.append(a)
            rhs.append(Fraction(0))
            rows.append(tuple(-x for x in a))
            rhs.append(-dot(a, space.unit))
        space._derived[key] = dd.polytope_vertices(rows, rhs, space.dim)
    return space._derived[key]


def unit_ball_vertices(space: AOUSpace) -> list[Vec]:
    """Vertices of the order-norm unit ball [-e, e]."""
    key = "ball_vertices"
    if key not in space._derived:
        rows, rhs = [], []
        for a in space.cone.hrep():
            ae = dot(a, space.unit)
            rows.append(a)
            rhs.append(-ae)
            rows.append(tuple(-x for x in a))
            rhs.append(-ae)
        space._derived[key] = dd.polytope_vertices(rows, rhs, space.dim)
    return space._derived[key]


# -- builders --------------------------------------------------------------

LIN_SPACE_CAP = 12


def linf(n: int) -> AOUSpace:
    """Coordinatewise order on Q^n with unit (1, ..., 1)."""
    if n < 1:
        raise InputError("linf(n) needs n >= 1")
    cone = Cone.from_generators([unit_vec(i, n) for i in range(n)], dim=n)
    return AOUSpace(n, cone, (1,) * n, label=f"linf({n})")


def lin_space(n: int) -> AOUSpace:
    """span{1, t_1, ..., t_n} inside C([-1,1]^n), coefficients (a_0, ..., a_n).

    The function a_0 + sum a_i t_i is nonnegative on the cube iff
    a_0 + sum sigma_i a_i >= 0 for every sign pattern sigma, giving 2^n rows.
    """
    if n < 1:
        raise InputError("lin_space(n) needs n >= 1")
    if n > LIN_SPACE_CAP:
        raise SizeLimitError(f"lin_space capped at n <= {LIN_SPACE_CAP} (2^n rows)")
    rows = []
    for mask in range(1 << n):
        rows.append(tuple([Fraction(1)] + [Fraction(-1 if mask >> i & 1 else 1) for i in range(n)]))
    cone = Cone.from_inequalities(rows, dim=n + 1)
    return AOUSpace(n + 1, cone, unit_vec(0, n + 1), label=f"lin_space({n})")


def sym_space(n: int) -> AOUSpace:
    """Real symmetric n x n matrices, PSD cone, unit = identity."""
    if n < 1:
        raise InputError("sym_space(n) needs n >= 1")
    cone = Cone.sym_psd(n)
    return AOUSpace(cone.dim, cone, pack_sym(Matrix.identity(n)), label=f"sym_space({n})")


def dual_augmented(space: AOUSpace) -> AOUSpace:
    """V* + Q with cone {(f, t) : f(v) + t >= 0 for all 0 <= v <= e}.

    One inequality row (p, 1) per vertex p of the order interval suffices,
    since the interval is their convex hull. Unit = (0, ..., 0, 1): the
    constant-one functional slot.
    """
    space.cone.require_polyhedral("dual_augmented")
    verts = order_interval_vertices(space)
    rows = [tuple(list(p) + [Fraction(1)]) for p in verts]
    cone = Cone.from_inequalities(rows, dim=space.dim + 1)
    unit = unit_vec(space.dim, space.dim + 1)
    return AOUSpace(space.dim + 1, cone, unit, label=f"dual_augmented({space.label})")


_BUILDERS = {"linf": linf, "lin_space": lin_space, "sym_space": sym_space}


def build(name: str, param) -> AOUSpace:
    """Dispatch on builder name; dual_augmented takes a space, the rest an n."""
    if name == "dual_augmented":
        if not isinstance(param, AOUSpace):
            raise InputError("dual_augmented takes a built space")
        return dual_augmented(param)
    if name not in _BUILDERS:
        raise InputError(f"unknown space builder {name!r}; have {sorted(_BUILDERS)} + dual_augmented")
    return _BUILDERS[name](int(param))
