"""Exact rational linear programming with verifiable certificates.

Two-phase primal simplex over Fraction with Bland's rule, so termination is
guaranteed and every answer is exact. Each outcome carries a certificate
that re-verifies by substitution:

  optimal     primal point satisfying every row, plus dual multipliers with
              sum_i mu_i * a_i == objective and sum_i mu_i * b_i == value.
              Sign convention per row sense: for a minimize problem mu_i >= 0
              on >=-rows and mu_i <= 0 on <=-rows; flipped for maximize;
              equality rows unrestricted. (So "maximize x s.t. x <= 1" gets
              dual (1), the textbook convention.)

  infeasible  a Farkas witness: nonnegative multipliers on the rows oriented
              as >= (a <=-row is used negated, equality rows may carry either
              sign) combining to 0 >= positive, i.e. a proof of 0 <= -1.

  unbounded   a feasible point plus an improving ray.

Variables are free; per-variable bounds are folded into explicit rows
appended after the caller's rows, and certificates cover that expanded
system (LPOutcome.system holds it).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InvariantViolation, ShapeError
from .linalg import Vec, dot, frac, integerize, vec, zeros

LE, EQ, GE = "<=", "=", ">="
_SENSES = (LE, EQ, GE)

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LPSystem:
    """The expanded constraint system a certificate refers to."""

    objective: Vec
    rows: tuple[Vec, ...]
    rhs: Vec
    senses: tuple[str, ...]
    maximize: bool
    n_user_rows: int


@dataclass(frozen=True)
class LPOutcome:
    status: str
    system: LPSystem
    primal: Vec | None = None
    value: Fraction | None = None
    dual_certificate: Vec | None = None
    ray: Vec | None = None

    def verify(self) -> bool:
        try:
            verify_outcome(self)
        except InvariantViolation:
            return False
        return True


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, j: int) -> None:
    pv = tab[r][j]
    tab[r] = [x / pv for x in tab[r]]
    for i in range(len(tab)):
        if i != r and tab[i][j] != 0:
            f = tab[i][j]
            row_r = tab[r]
            tab[i] = [x - f * y for x, y in zip(tab[i], row_r)]
    basis[r] = j


def _run_simplex(tab: list[list[Fraction]], basis: list[int], allowed: int) -> int | None:
    """Run simplex to optimality on tableau with objective as last row.

    Columns [0, allowed) may enter the basis. Returns None at optimality or
    the entering column index when unbounded. Bland's rule throughout.
    """
    m = len(tab) - 1
    while True:
        obj = tab[m]  # _pivot rebinds rows, reread each pass
        enter = None
        for j in range(allowed):
            if obj[j] < 0:
                enter = j
                break
        if enter is None:
            return None
        leave = None
        best = None
        for i in range(m):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return enter
        _pivot(tab, basis, leave, enter)


def _standard_simplex(
    a: list[list[Fraction]], b: list[Fraction], c: list[Fraction]
) -> tuple[str, Vec | None, Vec, Vec | None]:
    """min c.x s.t. a x = b, x >= 0.

    Returns (status, x, y, ray) where y are row multipliers relative to the
    input equalities (internal row sign flips already undone): at optimality
    y satisfies y.A <= c componentwise with y.b = value; at infeasibility
    y.A <= 0 with y.b > 0.
    """
    m, n = len(a), len(c)
    flip = [Fraction(-1) if bi < 0 else Fraction(1) for bi in b]
    rows = [[f * x for x in row] for f, row in zip(flip, a)]
    rhs = [f * bi for f, bi in zip(flip, b)]

    # columns: n real, m artificial, 1 rhs
    tab = [rows[i] + [Fraction(1 if k == i else 0) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    # phase 1: minimize sum of artificials
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        obj = [o - t for o, t in zip(obj, tab[i])]
    for k in range(m):
        obj[n + k] += 1  # cost 1 on artificials, cancelled for basic ones above
    tab.append(obj)
    if _run_simplex(tab, basis, n) is not None:
        raise InvariantViolation("phase-1 objective is bounded below by zero")
    phase1 = -tab[m][-1]
    if phase1 > 0:
        y = tuple(flip[i] * (1 - tab[m][n + i]) for i in range(m))
        return INFEASIBLE, None, y, None

    # Drive basic artificials out so they cannot creep back above zero in
    # phase 2. A row with no real coefficient left is redundant; its
    # artificial stays basic at zero and the row never changes again.
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if tab[i][j] != 0:
                    _pivot(tab, basis, i, j)
                    break

    # phase 2: real objective; artificial columns stay in the tableau (never
    # entering) so duals remain readable from their reduced costs.
    obj = list(c) + [Fraction(0)] * (m + 1)
    for i in range(m):
        cb = c[basis[i]] if basis[i] < n else Fraction(0)
        if cb != 0:
            obj = [o - cb * t for o, t in zip(obj, tab[i])]
    tab[m] = obj
    enter = _run_simplex(tab, basis, n)
    y = tuple(flip[i] * (-tab[m][n + i]) for i in range(m))
    x = list(zeros(n))
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
    if enter is not None:
        ray = list(zeros(n))
        ray[enter] = Fraction(1)
        for i in range(m):
            if basis[i] < n:
                ray[basis[i]] = -tab[i][enter]
        return UNBOUNDED, tuple(x), y, tuple(ray)
    return OPTIMAL, tuple(x), y, None


def solve_lp(
    objective: Sequence,
    rows: Sequence[Sequence],
    rhs: Sequence,
    senses: Sequence[str],
    *,
    maximize: bool = False,
    bounds: Sequence[tuple | None] | None = None,
) -> LPOutcome:
    """Optimize objective.x subject to rows[i].x (sense_i) rhs[i].

    bounds, when given, is one (lo, hi) pair per variable (either side may be
    None); the pairs become explicit rows after the user rows. The returned
    outcome always self-verifies before it is handed back.
    """
    c_user = vec(objective)
    n = len(c_user)
    ext_rows = [vec(r) for r in rows]
    ext_rhs = [frac(x) for x in rhs]
    ext_senses = list(senses)
    if len(ext_rows) != len(ext_rhs) or len(ext_rows) != len(ext_senses):
        raise ShapeError("rows, rhs, senses must align")
    for r in ext_rows:
        if len(r) != n:
            raise ShapeError("row length differs from objective length")
    for s in ext_senses:
        if s not in _SENSES:
            raise ShapeError(f"unknown sense {s!r}")
    n_user = len(ext_rows)
    if bounds is not None:
        if len(bounds) != n:
            raise ShapeError("bounds must give one pair per variable")
        for j, bd in enumerate(bounds):
            if bd is None:
                continue
            lo, hi = bd
            if lo is not None:
                ext_rows.append(tuple(frac(1 if k == j else 0) for k in range(n)))
                ext_rhs.append(frac(lo))
                ext_senses.append(GE)
            if hi is not None:
                ext_rows.append(tuple(frac(1 if k == j else 0) for k in range(n)))
                ext_rhs.append(frac(hi))
                ext_senses.append(LE)

    system = LPSystem(
        objective=c_user,
        rows=tuple(ext_rows),
        rhs=vec(ext_rhs),
        senses=tuple(ext_senses),
        maximize=maximize,
        n_user_rows=n_user,
    )

    c_min = [-x for x in c_user] if maximize else list(c_user)
    m = len(ext_rows)
    # standard form: x = u - w, slack per inequality row
    slack_of: dict[int, int] = {}
    width = 2 * n
    for i, s in enumerate(ext_senses):
        if s != EQ:
            slack_of[i] = width
            width += 1
    a_std = []
    for i, r in enumerate(ext_rows):
        row = list(r) + [-x for x in r] + [Fraction(0)] * (width - 2 * n)
        if i in slack_of:
            row[slack_of[i]] = Fraction(1) if ext_senses[i] == LE else Fraction(-1)
        a_std.append(row)
    c_std = c_min + [-x for x in c_min] + [Fraction(0)] * (width - 2 * n)

    status, xz, y, rayz = _standard_simplex(a_std, list(ext_rhs), c_std)

    if status == INFEASIBLE:
        farkas = []
        for i, s in enumerate(ext_senses):
            farkas.append(-y[i] if s == LE else y[i])
        farkas = vec(integerize(farkas))
        out = LPOutcome(INFEASIBLE, system, dual_certificate=farkas)
        verify_outcome(out)
        return out

    x = tuple(xz[j] - xz[n + j] for j in range(n))
    if status == UNBOUNDED:
        ray = tuple(rayz[j] - rayz[n + j] for j in range(n))
        out = LPOutcome(UNBOUNDED, system, primal=x, ray=ray)
        verify_outcome(out)
        return out

    value = dot(c_min, x)
    mu = list(y)
    if maximize:
        value = -value
        mu = [-v for v in mu]
    out = LPOutcome(OPTIMAL, system, primal=x, value=value, dual_certificate=vec(mu))
    verify_outcome(out)
    return out


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise InvariantViolation(f"certificate check failed: {what}")


def verify_outcome(out: LPOutcome) -> None:
    """Re-verify an LPOutcome by exact substitution; raises on any failure."""
    sys_ = out.system
    rows, rhs, senses = sys_.rows, sys_.rhs, sys_.senses
    n = len(sys_.objective)

    def feasible(x: Vec) -> None:
        for r, b, s in zip(rows, rhs, senses):
            v = dot(r, x)
            if s == LE:
                _check(v <= b, f"row {r} . x = {v} </= {b}")
            elif s == GE:
                _check(v >= b, f"row {r} . x = {v} >/= {b}")
            else:
                _check(v == b, f"row {r} . x = {v} != {b}")

    if out.status == OPTIMAL:
        _check(out.primal is not None and out.dual_certificate is not None, "missing parts")
        feasible(out.primal)
        _check(dot(sys_.objective, out.primal) == out.value, "objective value mismatch")
        mu = out.dual_certificate
        _check(len(mu) == len(rows), "dual length")
        for m_i, s in zip(mu, senses):
            if s == GE:
                _check(m_i <= 0 if sys_.maximize else m_i >= 0, "dual sign on >= row")
            elif s == LE:
                _check(m_i >= 0 if sys_.maximize else m_i <= 0, "dual sign on <= row")
        comb = zeros(n)
        for m_i, r in zip(mu, rows):
            comb = tuple(c + m_i * x for c, x in zip(comb, r))
        _check(comb == sys_.objective, "dual combination != objective")
        _check(dot(mu, rhs) == out.value, "dual value != primal value")
    elif out.status == INFEASIBLE:
        yv = out.dual_certificate
        _check(yv is not None and len(yv) == len(rows), "missing farkas")
        comb = zeros(n)
        total = Fraction(0)
        for y_i, r, b, s in zip(yv, rows, rhs, senses):
            if s == GE:
                _check(y_i >= 0, "farkas sign on >= row")
                comb = tuple(c + y_i * x for c, x in zip(comb, r))
                total += y_i * b
            elif s == LE:
                _check(y_i >= 0, "farkas sign on <= row")
                comb = tuple(c - y_i * x for c, x in zip(comb, r))
                total -= y_i * b
            else:
                comb = tuple(c + y_i * x for c, x in zip(comb, r))
                total += y_i * b
        _check(comb == zeros(n), "farkas combination != 0")
        _check(total > 0, "farkas rhs combination not positive")
    elif out.status == UNBOUNDED:
        _check(out.primal is not None and out.ray is not None, "missing parts")
        feasible(out.primal)
        d = out.ray
        for r, s in zip(rows, senses):
            v = dot(r, d)
            if s == LE:
                _check(v <= 0, "ray leaves <= row")
            elif s == GE:
                _check(v >= 0, "ray leaves >= row")
            else:
                _check(v == 0, "ray leaves = row")
        improvement = dot(sys_.objective, d)
        _check(improvement > 0 if sys_.maximize else improvement < 0, "ray does not improve")
    else:
        raise InvariantViolation(f"unknown status {out.status}")
