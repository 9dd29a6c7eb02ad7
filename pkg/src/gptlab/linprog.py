"""Self-contained two-phase simplex solver.

Used for cone membership certificates, joint-measurability feasibility,
measurement-error minimisation, and Lipschitz-ball optimisation.  The
instances in this package are tiny (at most a few hundred variables), and
exact pivoting over rationals is needed for cone certificates, so we ship
our own dense tableau simplex instead of binding an external solver.

Bland's anti-cycling rule is always on: entering variable is the lowest
index with a negative reduced cost, ties in the ratio test break toward
the lowest basis index.  Correctness over speed at this scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .scalars import Context, FLOAT, dot

LE, EQ, GE = "<=", "==", ">="

_MAX_PIVOTS = 50_000


@dataclass
class LinearProgram:
    """min/max c.x subject to rows (coeffs, rel, rhs) and optional var bounds.

    Variables are free unless a lower/upper bound is given.  `lower` and
    `upper` may be None (all free), a scalar applied to every variable, or
    a per-variable sequence where None means unbounded on that side.
    """

    n_vars: int
    objective: Sequence
    sense: str = "min"
    constraints: list = field(default_factory=list)
    lower: object = None
    upper: object = None

    def add(self, coeffs, rel, rhs):
        if len(coeffs) != self.n_vars:
            raise ValueError(f"constraint has {len(coeffs)} coefficients, expected {self.n_vars}")
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        self.constraints.append((tuple(coeffs), rel, rhs))
        return self

    def _bound(self, which, j):
        b = self.lower if which == "lo" else self.upper
        if b is None:
            return None
        if isinstance(b, (list, tuple)):
            return b[j]
        return b


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: object = None
    point: Optional[tuple] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


@dataclass
class FeasibilityResult:
    feasible: bool
    witness: Optional[tuple] = None


class _Tableau:
    """Dense simplex tableau in standard form: min c.y, A y = b, y >= 0."""

    def __init__(self, rows, rhs, ctx):
        self.rows = [list(r) for r in rows]
        self.rhs = list(rhs)
        self.ctx = ctx
        self.basis = [-1] * len(rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    def price_out(self, cost):
        """Objective row (reduced costs) for the current basis, plus -z."""
        ctx = self.ctx
        obj = list(cost)
        zval = ctx.zero()
        for i, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb == 0:
                continue
            row = self.rows[i]
            for j in range(len(obj)):
                obj[j] -= cb * row[j]
            zval -= cb * self.rhs[i]
        return obj, zval

    def pivot(self, r, c):
        rows, rhs = self.rows, self.rhs
        prow = rows[r]
        pv = prow[c]
        inv = 1 / pv
        rows[r] = prow = [v * inv for v in prow]
        rhs[r] *= inv
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][c]
            if f == 0:
                continue
            rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
            rhs[i] -= f * rhs[r]
        self.basis[r] = c

    def run(self, cost, allowed_cols):
        """Minimise cost over the current basis; returns (status, obj_row, z)."""
        ctx = self.ctx
        obj, zval = self.price_out(cost)
        for _ in range(_MAX_PIVOTS):
            enter = -1
            for j in allowed_cols:
                if ctx.lt(obj[j], 0):
                    enter = j  # Bland: lowest index
                    break
            if enter < 0:
                return "optimal", obj, zval
            leave, best = -1, None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if not ctx.gt(a, 0):
                    continue
                ratio = self.rhs[i] / a
                if best is None or ratio < best or (
                    ratio == best and self.basis[i] < self.basis[leave]
                ):
                    leave, best = i, ratio
            if leave < 0:
                return "unbounded", obj, zval
            self.pivot(leave, enter)
            # update the objective row with the normalized pivot row
            fobj = obj[enter]
            if fobj != 0:
                prow = self.rows[leave]
                for j in range(len(obj)):
                    obj[j] -= fobj * prow[j]
                zval -= fobj * self.rhs[leave]
        raise RuntimeError("simplex exceeded pivot budget (cycling?)")


def _standardize(p: LinearProgram, ctx: Context):
    """Shift/split variables to y >= 0 and build equality rows with slacks.

    Returns (rows, rhs, cost, recover, const) where recover maps a standard
    point y back to original coordinates and const is the objective offset.
    """
    zero, one = ctx.zero(), ctx.one()
    cols = []  # per original var: ("shift", col, lb) | ("neg", col, ub) | ("split", c+, c-)
    extra_rows = []  # upper-bound rows added as constraints
    ncol = 0
    for j in range(p.n_vars):
        lb, ub = p._bound("lo", j), p._bound("up", j)
        if lb is not None:
            lb = ctx.convert(lb)
            cols.append(("shift", ncol, lb))
            ncol += 1
            if ub is not None:
                extra_rows.append((j, LE, ctx.convert(ub)))
        elif ub is not None:
            cols.append(("neg", ncol, ctx.convert(ub)))
            ncol += 1
        else:
            cols.append(("split", ncol, ncol + 1))
            ncol += 2

    obj = [ctx.convert(c) for c in p.objective]
    if p.sense == "max":
        obj = [-c for c in obj]
    elif p.sense != "min":
        raise ValueError(f"unknown sense {p.sense!r}")

    cost = [zero] * ncol
    const = zero
    for j, spec in enumerate(cols):
        cj = obj[j]
        kind = spec[0]
        if kind == "shift":
            cost[spec[1]] = cj
            const += cj * spec[2]
        elif kind == "neg":
            cost[spec[1]] = -cj
            const += cj * spec[2]
        else:
            cost[spec[1]] = cj
            cost[spec[2]] = -cj

    raw = [( [ctx.convert(a) for a in coeffs], rel, ctx.convert(rhs) )
           for coeffs, rel, rhs in p.constraints]
    for j, rel, bound in extra_rows:
        unit = [zero] * p.n_vars
        unit[j] = one
        raw.append((unit, rel, bound))

    rows, rhs, rels = [], [], []
    for coeffs, rel, b in raw:
        row = [zero] * ncol
        for j, a in enumerate(coeffs):
            if a == 0:
                continue
            spec = cols[j]
            if spec[0] == "shift":
                row[spec[1]] += a
                b -= a * spec[2]
            elif spec[0] == "neg":
                row[spec[1]] -= a
                b -= a * spec[2]
            else:
                row[spec[1]] += a
                row[spec[2]] -= a
        rows.append(row)
        rhs.append(b)
        rels.append(rel)

    # slacks; then flip rows with negative rhs so b >= 0
    nslack = sum(1 for r in rels if r != EQ)
    srow = 0
    for i, rel in enumerate(rels):
        rows[i] = rows[i] + [zero] * nslack
        if rel != EQ:
            rows[i][ncol + srow] = one if rel == LE else -one
            srow += 1
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    cost = cost + [zero] * nslack

    def recover(y):
        out = []
        for spec in cols:
            if spec[0] == "shift":
                out.append(y[spec[1]] + spec[2])
            elif spec[0] == "neg":
                out.append(spec[2] - y[spec[1]])
            else:
                out.append(y[spec[1]] - y[spec[2]])
        return tuple(out)

    return rows, rhs, cost, recover, const, ncol + nslack


def _phase1(tab: _Tableau, nstruct: int, ctx: Context):
    """Install a basis: slack columns where possible, artificials elsewhere."""
    zero, one = ctx.zero(), ctx.one()
    nrows = len(tab.rows)
    need_artificial = []
    for i, row in enumerate(tab.rows):
        found = -1
        for j in range(nstruct - 1, -1, -1):
            if row[j] == one and all(tab.rows[k][j] == 0 for k in range(nrows) if k != i):
                found = j
                break
        if found >= 0:
            tab.basis[i] = found
        else:
            need_artificial.append(i)
    if not need_artificial:
        return "optimal", []
    base = nstruct
    art_cols = []
    for k, i in enumerate(need_artificial):
        for r in range(nrows):
            tab.rows[r].append(one if r == i else zero)
        tab.basis[i] = base + k
        art_cols.append(base + k)
    cost = [zero] * (nstruct + len(art_cols))
    for c in art_cols:
        cost[c] = one
    allowed = list(range(nstruct))  # artificials never re-enter
    status, _obj, zval = tab.run(cost, allowed)
    if status != "optimal":
        raise RuntimeError("phase 1 cannot be unbounded")
    if ctx.gt(-zval, 0):  # min sum of artificials > 0
        return "infeasible", art_cols
    # drive leftover artificials out of the basis
    art_set = set(art_cols)
    drop_rows = []
    for i in range(nrows):
        if tab.basis[i] in art_set:
            piv = -1
            for j in range(nstruct):
                if not ctx.is_zero(tab.rows[i][j]):
                    piv = j
                    break
            if piv >= 0:
                tab.pivot(i, piv)
            else:
                drop_rows.append(i)  # redundant row
    for i in sorted(drop_rows, reverse=True):
        del tab.rows[i]
        del tab.rhs[i]
        del tab.basis[i]
    for r in range(len(tab.rows)):
        del tab.rows[r][nstruct:]
    return "optimal", []


def _solve_standard(rows, rhs, cost, ctx, nstruct):
    tab = _Tableau(rows, rhs, ctx)
    status, _ = _phase1(tab, nstruct, ctx)
    if status == "infeasible":
        return "infeasible", None, None
    allowed = list(range(nstruct))
    status, _obj, zval = tab.run(cost, allowed)
    if status == "unbounded":
        return "unbounded", None, None
    point = [ctx.zero()] * nstruct
    for i, bj in enumerate(tab.basis):
        point[bj] = tab.rhs[i]
    return "optimal", -zval, point


def _certify(p: LinearProgram, x, ctx: Context):
    """Re-substitute the reported point into every original constraint."""
    slack_tol = 0 if ctx.exact else 100 * ctx.tol
    for coeffs, rel, rhs in p.constraints:
        v = dot(tuple(ctx.convert(a) for a in coeffs), x)
        b = ctx.convert(rhs)
        if rel == LE and not v <= b + slack_tol:
            raise RuntimeError(f"certification failed: {v} <= {b}")
        if rel == GE and not v >= b - slack_tol:
            raise RuntimeError(f"certification failed: {v} >= {b}")
        if rel == EQ and not abs(v - b) <= slack_tol:
            raise RuntimeError(f"certification failed: {v} == {b}")
    for j in range(p.n_vars):
        lb, ub = p._bound("lo", j), p._bound("up", j)
        if lb is not None and not x[j] >= ctx.convert(lb) - slack_tol:
            raise RuntimeError(f"certification failed: bound x[{j}] >= {lb}")
        if ub is not None and not x[j] <= ctx.convert(ub) + slack_tol:
            raise RuntimeError(f"certification failed: bound x[{j}] <= {ub}")


def lp_solve(p: LinearProgram, ctx: Context = FLOAT) -> LpResult:
    """Solve to a certified global optimum (two-phase simplex, Bland's rule)."""
    rows, rhs, cost, recover, const, nstruct = _standardize(p, ctx)
    if not rows:
        # standard form minimises cost.y over y >= 0 with no rows: the optimum
        # sits at y = 0 unless some direction strictly improves
        if all(ctx.ge(c, 0) for c in cost):
            x = recover([ctx.zero()] * nstruct)
            value = const if p.sense == "min" else -const
            return LpResult("optimal", value, x)
        return LpResult("unbounded")
    status, val, y = _solve_standard(rows, rhs, cost, ctx, nstruct)
    if status != "optimal":
        return LpResult(status)
    x = recover(y)
    value = val + const
    if p.sense == "max":
        value = -value
    _certify(p, x, ctx)
    return LpResult("optimal", value, x)


def lp_feasible(p: LinearProgram, ctx: Context = FLOAT) -> FeasibilityResult:
    """Phase-1 feasibility test with a witness point when feasible."""
    rows, rhs, cost, recover, _const, nstruct = _standardize(p, ctx)
    if not rows:
        return FeasibilityResult(True, recover([ctx.zero()] * nstruct))
    tab = _Tableau(rows, rhs, ctx)
    status, _ = _phase1(tab, nstruct, ctx)
    if status == "infeasible":
        return FeasibilityResult(False, None)
    point = [ctx.zero()] * nstruct
    for i, bj in enumerate(tab.basis):
        point[bj] = tab.rhs[i]
    x = recover(point)
    _certify(p, x, ctx)
    return FeasibilityResult(True, x)
