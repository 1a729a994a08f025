"""Injective (epsilon) and projective (pi) tensor cones on ordered spaces.

The epsilon cone is cut out by the product functionals f (x) g over extreme
state pairs; the pi cone is generated by products of positive elements.  Both
realized spaces carry the product unit e_V (x) e_W.  Coordinates are row-major:
the (i, j) basis tensor lands at index i * dim_W + j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cones import Certificate, Cone, extreme_rays, is_simplicial, member
from .errors import InputError, InvariantViolation, ShapeError
from .linalg import (
    Matrix,
    Vec,
    det,
    dot,
    frac,
    integerize,
    inverse,
    rank,
    solve,
    vec,
    vsub,
)
from .lp import EQ, GE, OPTIMAL, solve_lp
from .maps import UnitalMap
from .spaces import (
    AOUSpace,
    extreme_states,
    lin_space,
    linf,
    order_norm,
    unit_ball_vertices,
)

EPSILON = "epsilon"
PI = "pi"

FACTORIZE_STATE_CAP = 64


def kron_vec(a: Vec, b: Vec) -> Vec:
    return tuple(x * y for x in a for y in b)


@dataclass(eq=False)
class TensorElement:
    """An element of V (x) W, stored as a dim_V x dim_W coefficient matrix."""

    left: AOUSpace
    right: AOUSpace
    coeffs: Matrix

    def __post_init__(self) -> None:
        if self.coeffs.rows != self.left.dim or self.coeffs.cols != self.right.dim:
            raise ShapeError(
                f"coefficient matrix is {self.coeffs.rows}x{self.coeffs.cols}, "
                f"expected {self.left.dim}x{self.right.dim}"
            )

    def flatten(self) -> Vec:
        return tuple(x for row in self.coeffs.data for x in row)

    @classmethod
    def from_flat(cls, left: AOUSpace, right: AOUSpace, flat: Vec) -> "TensorElement":
        flat = vec(flat)
        if len(flat) != left.dim * right.dim:
            raise ShapeError("flattened tensor has the wrong length")
        rows = [
            flat[i * right.dim : (i + 1) * right.dim] for i in range(left.dim)
        ]
        return cls(left, right, Matrix.from_rows(rows))

    @classmethod
    def simple(cls, left: AOUSpace, right: AOUSpace, v: Vec, w: Vec) -> "TensorElement":
        v, w = vec(v), vec(w)
        return cls(left, right, Matrix.from_rows([[x * y for y in w] for x in v]))


@dataclass(eq=False)
class TensorSpace:
    left: AOUSpace
    right: AOUSpace
    kind: str
    realized: AOUSpace


_TENSOR_CACHE: dict = {}


def _unit_shift_decomposition(gens: tuple[Vec, ...], unit: Vec, b: Vec):
    """Minimal r with r*unit - b a conic combination of gens, plus the
    coefficients; None when no r works."""
    dim = len(unit)
    rows = [tuple([unit[c]] + [-g[c] for g in gens]) for c in range(dim)]
    out = solve_lp(
        vec([1] + [0] * len(gens)),
        rows,
        list(b),
        [EQ] * dim,
        bounds=[(0, None)] * (1 + len(gens)),
    )
    if out.status != OPTIMAL:
        return None
    return out.primal[0], out.primal[1:]


def _assert_epsilon_aou(space: AOUSpace) -> None:
    """The epsilon cone is closed by construction; pointedness is the rows
    spanning the dual, and since every row pairs to 1 with the unit, the
    order unit property reduces to that pairing being positive."""
    cone = space.cone
    if cone.has_strict_rows:
        raise InvariantViolation("epsilon cone must be closed")
    if rank(Matrix.from_rows(cone.inequalities)) != space.dim:
        raise InvariantViolation("epsilon cone is not pointed")
    for row in cone.inequalities:
        if dot(row, space.unit) <= 0:
            raise InvariantViolation("epsilon unit fails the order unit test")


def _cone_coefficients(gens: tuple[Vec, ...], target: Vec) -> Vec | None:
    rows = [tuple(g[c] for g in gens) for c in range(len(target))]
    out = solve_lp(
        vec([0] * len(gens)),
        rows,
        list(target),
        [EQ] * len(target),
        bounds=[(0, None)] * len(gens),
    )
    return out.primal if out.status == OPTIMAL else None


def _assert_pi_aou(ts_realized: AOUSpace, left: AOUSpace, right: AOUSpace) -> None:
    """Finitely generated, hence closed; pointedness is certified by a
    strictly positive product functional, and the order unit property by an
    explicit product decomposition of r*unit +- (basis tensor)."""
    gens = ts_realized.cone.generators
    if ts_realized.cone.has_strict_rows:
        raise InvariantViolation("pi cone must be closed")
    f0 = vec([0] * left.dim)
    for st in extreme_states(left):
        f0 = tuple(a + b for a, b in zip(f0, st.functional))
    g0 = vec([0] * right.dim)
    for st in extreme_states(right):
        g0 = tuple(a + b for a, b in zip(g0, st.functional))
    phi = kron_vec(f0, g0)
    for g in gens:
        if dot(phi, g) <= 0:
            raise InvariantViolation("pi cone is not pointed")

    vg, wg = left.cone.vrep(), right.cone.vrep()
    # per factor and basis vector: coefficients of r e + b and r e - b over
    # the factor generators, with one shared r (padded by the decomposition
    # of the unit itself)
    factor_dec = []
    for sp, basis_gens in ((left, vg), (right, wg)):
        eta = _cone_coefficients(basis_gens, sp.unit)
        if eta is None:
            raise InvariantViolation("factor unit escaped its own cone")
        per_basis = []
        for i in range(sp.dim):
            b = tuple(Fraction(int(j == i)) for j in range(sp.dim))
            plus = _unit_shift_decomposition(basis_gens, sp.unit, tuple(-x for x in b))
            minus = _unit_shift_decomposition(basis_gens, sp.unit, b)
            if plus is None or minus is None:
                raise InvariantViolation("factor unit fails the order unit test")
            r = max(plus[0], minus[0])
            lam_p = tuple(x + (r - plus[0]) * h for x, h in zip(plus[1], eta))
            lam_m = tuple(x + (r - minus[0]) * h for x, h in zip(minus[1], eta))
            per_basis.append((r, lam_p, lam_m))
        factor_dec.append(per_basis)

    # (r e + v)(x)(s e + w) + (r e - v)(x)(s e - w) = 2 r s e(x)e + 2 v(x)w
    nw = len(wg)
    dim = ts_realized.dim
    for i in range(left.dim):
        r, lam_p, lam_m = factor_dec[0][i]
        for j in range(right.dim):
            s, mu_p, mu_m = factor_dec[1][j]
            b_flat = tuple(
                Fraction(int(a == i and bb == j))
                for a in range(left.dim)
                for bb in range(right.dim)
            )
            for sgn in (1, -1):
                pairs = (
                    ((lam_p, mu_p), (lam_m, mu_m))
                    if sgn == 1
                    else ((lam_p, mu_m), (lam_m, mu_p))
                )
                total = [Fraction(0)] * dim
                for lam, mu in pairs:
                    for a, la in enumerate(lam):
                        if la == 0:
                            continue
                        for bix, muv in enumerate(mu):
                            if muv == 0:
                                continue
                            g = gens[a * nw + bix]
                            c = la * muv / 2
                            for t in range(dim):
                                total[t] += c * g[t]
                expect = tuple(
                    r * s * u + sgn * x for u, x in zip(ts_realized.unit, b_flat)
                )
                if tuple(total) != expect:
                    raise InvariantViolation("pi unit fails the order unit test")


def tensor_space(left: AOUSpace, right: AOUSpace, kind: str) -> TensorSpace:
    if kind not in (EPSILON, PI):
        raise InputError(f"unknown tensor cone kind {kind!r}")
    for sp in (left, right):
        sp.cone.require_polyhedral("tensor cones")
    key = (id(left), id(right), kind)
    hit = _TENSOR_CACHE.get(key)
    if hit is not None and hit[0] is left and hit[1] is right:
        return hit[2]

    dim = left.dim * right.dim
    unit = kron_vec(left.unit, right.unit)
    if kind == EPSILON:
        rows = [
            kron_vec(f.functional, g.functional)
            for f in extreme_states(left)
            for g in extreme_states(right)
        ]
        cone = Cone.from_inequalities(rows, dim=dim)
    else:
        gens = [
            kron_vec(v, w)
            for v in left.cone.vrep()
            for w in right.cone.vrep()
        ]
        cone = Cone.from_generators(gens, dim)
    realized = AOUSpace(
        dim=dim,
        cone=cone,
        unit=unit,
        label=f"{kind}({left.label},{right.label})",
    )
    if kind == EPSILON:
        _assert_epsilon_aou(realized)
    else:
        _assert_pi_aou(realized, left, right)
    ts = TensorSpace(left, right, kind, realized)
    _TENSOR_CACHE[key] = (left, right, ts)
    return ts


def member_tensor(ts: TensorSpace, z: TensorElement) -> Certificate:
    if z.left.dim != ts.left.dim or z.right.dim != ts.right.dim:
        raise ShapeError("tensor element does not match the tensor space")
    return member(ts.realized.cone, z.flatten())


def tensor_map(s: UnitalMap, t: UnitalMap, kind: str) -> UnitalMap:
    for m, name in ((s, "left"), (t, "right")):
        if not m.unital or not m.positive:
            raise InputError(f"{name} factor must be unital and positive")
    src = tensor_space(s.source, t.source, kind)
    tgt = tensor_space(s.target, t.target, kind)
    m = UnitalMap(src.realized, tgt.realized, Matrix.kron(s.matrix, t.matrix))
    if not m.unital:
        raise InvariantViolation("tensor of unital maps lost the unit")
    if kind == PI:
        # positivity on pi holds iff every product generator maps into the
        # target cone; the generator list is exactly the product list
        for g in src.realized.cone.generators:
            if member(tgt.realized.cone, m.apply(g)).verdict != "member":
                raise InvariantViolation("tensor map is not positive on the pi cone")
    else:
        # dual route: (S (x) T)^T (f (x) g) = (S^T f) (x) (T^T g), so it is
        # enough that each factor pulls extreme target states into the conic
        # hull of source states
        for factor in (s, t):
            hull = Cone.from_generators(
                [st.functional for st in extreme_states(factor.source)],
                factor.source.dim,
            )
            mt = factor.matrix.transpose()
            for st in extreme_states(factor.target):
                if member(hull, mt.apply(st.functional)).verdict != "member":
                    raise InvariantViolation(
                        "tensor map is not positive on the epsilon cone"
                    )
    return m


def injective_banach_norm(z: TensorElement) -> Fraction:
    """Max of |(f (x) g)(z)| over extreme state pairs; agrees with the order
    norm of z in the epsilon tensor space, and that agreement is checked."""
    best = Fraction(0)
    for f in extreme_states(z.left):
        row = z.coeffs.transpose().apply(f.functional)
        for g in extreme_states(z.right):
            best = max(best, abs(dot(row, g.functional)))
    eps_space = tensor_space(z.left, z.right, EPSILON).realized
    if best != order_norm(eps_space, z.flatten()):
        raise InvariantViolation(
            "injective norm disagrees with the epsilon order norm"
        )
    return best


@dataclass(frozen=True)
class NuclearityReport:
    nuclear: bool
    witness: TensorElement | None = None
    pi_certificate: Certificate | None = None
    epsilon_certificate: Certificate | None = None


def is_nuclear_pairwise(left: AOUSpace, right: AOUSpace) -> NuclearityReport:
    """Exact equality test of the two tensor cones on left (x) right.

    The pi cone always sits inside the epsilon cone; that inclusion is
    asserted.  Equality is decided by running every extreme ray of the
    epsilon cone through a pi membership test, so a negative answer comes
    with an explicit element of epsilon minus pi and a Farkas witness.
    """
    eps = tensor_space(left, right, EPSILON)
    pi = tensor_space(left, right, PI)
    pi_cone = pi.realized.cone
    for g in pi_cone.generators:
        for row in eps.realized.cone.inequalities:
            if dot(row, g) < 0:
                raise InvariantViolation("pi generator escapes the epsilon cone")
    # an epsilon extreme ray inside pi must be parallel to a listed pi
    # generator (extremality in the ambient cone), so only the unmatched
    # rays can separate the cones; test those first
    gen_index: dict = {}
    for idx, g in enumerate(pi_cone.generators):
        gen_index.setdefault(integerize(g), idx)
    matched, unmatched = [], []
    for ray in eps.realized.cone.vrep():
        (matched if integerize(ray) in gen_index else unmatched).append(ray)
    for ray in unmatched:
        cert = member(pi_cone, ray)
        if cert.verdict == "non_member":
            z = TensorElement.from_flat(left, right, ray)
            eps_cert = member(eps.realized.cone, ray)
            if eps_cert.verdict != "member":
                raise InvariantViolation("epsilon extreme ray left its own cone")
            return NuclearityReport(
                nuclear=False,
                witness=z,
                pi_certificate=cert,
                epsilon_certificate=eps_cert,
            )
    for ray in matched:
        idx = gen_index[integerize(ray)]
        g = pi_cone.generators[idx]
        j = next(i for i, x in enumerate(g) if x != 0)
        cert = Certificate(
            verdict="member",
            kind="conic_decomposition",
            decomposition=((idx, ray[j] / g[j]),),
        )
        if not cert.verify(pi_cone, ray):
            raise InvariantViolation("matched ray decomposition failed to verify")
    return NuclearityReport(nuclear=True)


def _default_battery() -> tuple[AOUSpace, ...]:
    return (linf(1), linf(2), linf(3), lin_space(1), lin_space(2))


_BATTERY: tuple[AOUSpace, ...] | None = None


def is_nuclear_fd(space: AOUSpace, battery: tuple[AOUSpace, ...] | None = None) -> bool:
    """Nuclearity of a single space, reported via simpliciality of its cone.

    The simpliciality criterion is cross-validated against the pairwise
    cone-equality oracle over a fixed battery of partners; any disagreement
    is a hard error rather than a silent answer.
    """
    global _BATTERY
    space.cone.require_polyhedral("nuclearity")
    simplicial = is_simplicial(space.cone)
    if battery is None:
        if _BATTERY is None:
            _BATTERY = _default_battery()
        battery = _BATTERY
    for partner in battery:
        expected = simplicial or is_simplicial(partner.cone)
        got = is_nuclear_pairwise(space, partner).nuclear
        if got != expected:
            raise InvariantViolation(
                "simpliciality criterion and pairwise cone equality disagree "
                f"against partner {partner.label}"
            )
    return simplicial


@dataclass(frozen=True)
class FactorizationResult:
    phi: UnitalMap
    psi: UnitalMap
    defect: Fraction
    success: bool
    states_used: int
    schedule: tuple[tuple[int, Fraction], ...]
    exhausted: bool


def _psi_entry(r: int, c: int, k: int) -> int:
    return r * k + c


def _best_psi(space: AOUSpace, phi_rows: list[Vec], vectors: list[Vec]):
    """One LP: the unital positive psi minimizing the worst order norm of
    psi(phi(v)) - v over the given vectors.  Variables are the dim x k
    entries of psi plus the defect bound t (last variable)."""
    d, k = space.dim, len(phi_rows)
    nvars = d * k + 1
    t_ix = d * k
    hrows = space.cone.hrep()
    rows, rhs, senses = [], [], []
    for i in range(d):
        coeff = [Fraction(0)] * nvars
        for j in range(k):
            coeff[_psi_entry(i, j, k)] = Fraction(1)
        rows.append(tuple(coeff))
        rhs.append(space.unit[i])
        senses.append(EQ)
    for j in range(k):
        for a in hrows:
            coeff = [Fraction(0)] * nvars
            for i in range(d):
                coeff[_psi_entry(i, j, k)] = a[i]
            rows.append(tuple(coeff))
            rhs.append(Fraction(0))
            senses.append(GE)
    for v in vectors:
        w = tuple(dot(row, v) for row in phi_rows)
        for a in hrows:
            ae = dot(a, space.unit)
            av = dot(a, v)
            for sign in (1, -1):
                coeff = [Fraction(0)] * nvars
                coeff[t_ix] = ae
                for i in range(d):
                    for j in range(k):
                        coeff[_psi_entry(i, j, k)] = -sign * a[i] * w[j]
                rows.append(tuple(coeff))
                rhs.append(-sign * av)
                senses.append(GE)
    obj = [Fraction(0)] * nvars
    obj[t_ix] = Fraction(1)
    bounds = [None] * (d * k) + [(Fraction(0), None)]
    out = solve_lp(vec(obj), rows, rhs, senses, bounds=bounds)
    if out.status != OPTIMAL:
        raise InvariantViolation("defect LP must be solvable")
    psi_rows = [
        tuple(out.primal[_psi_entry(i, j, k)] for j in range(k)) for i in range(d)
    ]
    return Matrix.from_rows(psi_rows), out.value


def factorize(
    space: AOUSpace,
    vectors: list[Vec] | None = None,
    eps: Fraction | int = Fraction(1, 10),
) -> FactorizationResult:
    """Approximate factorization of the identity through a coordinate space.

    phi collects state evaluations; psi is the best unital positive return
    map for the current state set, found by a single LP.  The state set
    grows greedily (most violated state first) until the defect drops below
    eps or the states run out.  With the default vectors (the unit ball
    vertices) the defect equals the operator norm of psi . phi - id exactly.
    """
    eps = frac(eps)
    space.cone.require_polyhedral("factorization")
    if vectors is None:
        vectors = [vec(v) for v in unit_ball_vertices(space)]
    else:
        vectors = [vec(v) for v in vectors]
    d = space.dim

    if is_simplicial(space.cone):
        rays = extreme_rays(space.cone)
        basis_cols = Matrix.from_rows(list(zip(*rays))) if d else Matrix.identity(0)
        alpha = solve(basis_cols, space.unit)
        assert alpha is not None and all(a > 0 for a in alpha)
        scaled = [tuple(a * x for x in ray) for a, ray in zip(alpha, rays)]
        psi_m = Matrix.from_rows(list(zip(*scaled)))
        phi_m = inverse(psi_m)
        assert phi_m is not None
        phi = UnitalMap(space, linf(d), phi_m)
        psi = UnitalMap(linf(d), space, psi_m)
        assert phi.unital and phi.positive and psi.unital and psi.positive
        assert (psi_m @ phi_m).data == Matrix.identity(d).data
        return FactorizationResult(
            phi=phi,
            psi=psi,
            defect=Fraction(0),
            success=True,
            states_used=d,
            schedule=((d, Fraction(0)),),
            exhausted=False,
        )

    pool = [s.functional for s in extreme_states(space)]
    # seed: d states with the largest |det|, so phi starts injective
    best_det, seed = None, None
    for combo in combinations(range(len(pool)), d):
        dv = abs(det(Matrix.from_rows([pool[i] for i in combo])))
        if best_det is None or dv > best_det:
            best_det, seed = dv, combo
    chosen = list(seed) if seed is not None and best_det else list(range(min(d, len(pool))))
    schedule: list[tuple[int, Fraction]] = []
    best: tuple[Fraction, Matrix, list[Vec]] | None = None
    while True:
        phi_rows = [pool[i] for i in chosen]
        psi_m, defect = _best_psi(space, phi_rows, vectors)
        # the LP bound is tight: recompute the defect from the solution
        recomputed = Fraction(0)
        for v in vectors:
            img = psi_m.apply(Matrix.from_rows(phi_rows).apply(v))
            recomputed = max(recomputed, order_norm(space, vsub(img, v)))
        if recomputed != defect:
            raise InvariantViolation("defect LP bound is not tight")
        schedule.append((len(chosen), defect))
        if best is None or defect < best[0]:
            best = (defect, psi_m, phi_rows)
        if defect <= eps or len(chosen) >= min(len(pool), FACTORIZE_STATE_CAP):
            break
        # add the state most violated by the worst residual
        worst_v = max(
            vectors,
            key=lambda v: order_norm(
                space, vsub(psi_m.apply(Matrix.from_rows(phi_rows).apply(v)), v)
            ),
        )
        residual = vsub(
            psi_m.apply(Matrix.from_rows(phi_rows).apply(worst_v)), worst_v
        )
        remaining = [i for i in range(len(pool)) if i not in chosen]
        chosen.append(max(remaining, key=lambda i: abs(dot(pool[i], residual))))

    defect, psi_m, phi_rows = best
    k = len(phi_rows)
    phi = UnitalMap(space, linf(k), Matrix.from_rows(phi_rows))
    psi = UnitalMap(linf(k), space, psi_m)
    assert phi.unital and phi.positive
    assert psi.unital and psi.positive
    return FactorizationResult(
        phi=phi,
        psi=psi,
        defect=defect,
        success=defect <= eps,
        states_used=k,
        schedule=tuple(schedule),
        exhausted=len(chosen) >= min(len(pool), FACTORIZE_STATE_CAP),
    )
