"""Width and error measures for outcome distributions and measurements.

Two preparation-side measures (overall width at a confidence level,
minimum localization error) and three measurement-error measures (error
bar width, the Lipschitz-ball expectation distance, and the worst-case
per-outcome probability gap).

Widths are infima over ball diameters; on a finite metric space the ball
composition only changes at diameters 0 and 2*d(x, a), so the infimum is
attained on that finite candidate set and is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linprog import GE, LE, LinearProgram, lp_solve
from .model import Measurement, Theory, effect_eval, in_state_space
from .scalars import Context, FLOAT


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Finitely many outcome labels with a metric between them."""

    points: tuple
    dist: tuple

    @classmethod
    def discrete(cls, points, scale=1) -> "FiniteMetricSpace":
        k = len(points)
        return cls(
            points=tuple(points),
            dist=tuple(tuple(0 if i == j else scale for j in range(k)) for i in range(k)),
        )

    @classmethod
    def line(cls, points) -> "FiniteMetricSpace":
        k = len(points)
        return cls(
            points=tuple(points),
            dist=tuple(tuple(abs(i - j) for j in range(k)) for i in range(k)),
        )

    def index(self, label) -> int:
        return self.points.index(label)

    def d(self, a, b):
        return self.dist[self.index(a)][self.index(b)]

    def validate(self, ctx: Context = FLOAT) -> None:
        k = len(self.points)
        if len(self.dist) != k or any(len(r) != k for r in self.dist):
            raise ValueError("distance matrix shape does not match points")
        for i in range(k):
            if not ctx.is_zero(self.dist[i][i]):
                raise ValueError("nonzero self-distance")
            for j in range(k):
                if not ctx.eq(self.dist[i][j], self.dist[j][i]):
                    raise ValueError("distance matrix is not symmetric")
                if i != j and not ctx.gt(self.dist[i][j], 0):
                    raise ValueError("distinct points at non-positive distance")
        for i in range(k):
            for j in range(k):
                for l in range(k):
                    if not ctx.le(self.dist[i][j], self.dist[i][l] + self.dist[l][j]):
                        raise ValueError("triangle inequality fails")

    def ball(self, a, width, ctx: Context) -> tuple:
        """Indices of points within width/2 of the label ``a``."""
        ia = self.index(a)
        half = width / 2
        return tuple(j for j in range(len(self.points)) if ctx.le(self.dist[ia][j], half))

    def width_candidates(self) -> tuple:
        """{0} plus the doubled pairwise distances, ascending."""
        vals = {0 * self.dist[0][0]}
        for row in self.dist:
            for v in row:
                vals.add(2 * v)
        return tuple(sorted(vals))


def metric_of(m: Measurement) -> FiniteMetricSpace:
    return m.metric if m.metric is not None else FiniteMetricSpace.discrete(m.outcomes)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities aligned with the points of a finite metric space."""

    metric: FiniteMetricSpace
    probs: tuple

    def prob(self, label):
        return self.probs[self.metric.index(label)]

    def max_prob(self):
        return max(self.probs)


def distribution(t: Theory, m: Measurement, omega, check_state: bool = True) -> OutcomeDistribution:
    """Outcome statistics of the measurement on a state."""
    if check_state and not in_state_space(t, omega):
        raise ValueError("omega is not a state of the theory")
    metric = metric_of(m)
    return OutcomeDistribution(
        metric=metric, probs=tuple(effect_eval(t, e, omega) for e in m.effects)
    )


def overall_width(p: OutcomeDistribution, eps, ctx: Context = FLOAT):
    """Smallest ball diameter carrying mass at least 1 - eps."""
    eps = ctx.convert(eps)
    if not (ctx.ge(eps, 0) and ctx.le(eps, 1)):
        raise ValueError("confidence parameter must lie in [0, 1]")
    need = 1 - eps
    for w in p.metric.width_candidates():
        for a in p.metric.points:
            mass = sum(p.probs[j] for j in p.metric.ball(a, w, ctx))
            if ctx.ge(mass, need):
                return w
    raise RuntimeError("width candidates exhausted; distribution not normalized?")


def localization_error(p: OutcomeDistribution):
    """One minus the largest outcome probability."""
    return 1 - p.max_prob()


def _shared_metric(f_ideal: Measurement, f_approx: Measurement) -> FiniteMetricSpace:
    if tuple(f_ideal.outcomes) != tuple(f_approx.outcomes):
        raise ValueError("measurements must share one outcome set")
    return metric_of(f_ideal)


def _require_conforming(t: Theory) -> None:
    if t.kind == "polygon" and t.n is not None and t.n % 2 == 0:
        raise ValueError(
            "even polygons must be re-expressed (psi_transform) before "
            "eigenstate-based measures are taken"
        )


def eigenstate_face_vertices(t: Theory, effect) -> tuple:
    """Vertices on which the effect evaluates to one (its eigenstate face)."""
    ctx = t.ctx
    return tuple(v for v in t.vertices if ctx.eq(effect_eval(t, effect, v), 1))


def error_bar_width(t: Theory, f_approx: Measurement, f_ideal: Measurement, eps):
    """Spread of the approximating outcomes around each ideal outcome.

    For every outcome the constraint is checked on the vertices of that
    outcome's eigenstate face; the face is a polytope face, so vertex
    checks are exhaustive.  An outcome with an empty face signals a
    non-ideal reference measurement.
    """
    ctx = t.ctx
    _require_conforming(t)
    eps = ctx.convert(eps)
    if not (ctx.ge(eps, 0) and ctx.le(eps, 1)):
        raise ValueError("confidence parameter must lie in [0, 1]")
    metric = _shared_metric(f_ideal, f_approx)
    faces = []
    for label, e in zip(f_ideal.outcomes, f_ideal.effects):
        verts = eigenstate_face_vertices(t, e)
        if not verts:
            raise ValueError(
                f"outcome {label!r} has no eigenstate among the vertices; "
                "reference measurement is not ideal in this representation"
            )
        faces.append((label, verts))
    need = 1 - eps
    for w in metric.width_candidates():
        ok = True
        for label, verts in faces:
            ball = metric.ball(label, w, ctx)
            for v in verts:
                mass = sum(effect_eval(t, f_approx.effects[j], v) for j in ball)
                if not ctx.ge(mass, need):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return w
    raise RuntimeError("width candidates exhausted")


def werner_distance(t: Theory, f_approx: Measurement, f_ideal: Measurement):
    """Worst expectation gap over the Lipschitz ball of outcome functions.

    The objective is shift-invariant, so the function value at the first
    outcome is pinned to zero; for each vertex one LP maximises the gap
    (the ball is symmetric, so the absolute value costs nothing), and the
    state supremum is attained at a vertex because the gap is |affine|.
    """
    ctx = t.ctx
    metric = _shared_metric(f_ideal, f_approx)
    k = len(metric.points)
    if k == 1:
        return ctx.zero()
    best = ctx.zero()
    for v in t.vertices:
        deltas = [
            effect_eval(t, ea, v) - effect_eval(t, ei, v)
            for ea, ei in zip(f_approx.effects, f_ideal.effects)
        ]
        # variables: h(a_1) ... h(a_{k-1}), with h(a_0) = 0 pinned
        p = LinearProgram(n_vars=k - 1, objective=deltas[1:], sense="max")
        for i in range(1, k):
            row = [ctx.zero()] * (k - 1)
            row[i - 1] = ctx.one()
            p.add(row, LE, metric.dist[i][0])
            p.add(row, GE, -metric.dist[i][0])
        for i in range(1, k):
            for j in range(i + 1, k):
                row = [ctx.zero()] * (k - 1)
                row[i - 1] = ctx.one()
                row[j - 1] = -ctx.one()
                p.add(row, LE, metric.dist[i][j])
                p.add(row, GE, -metric.dist[i][j])
        res = lp_solve(p, ctx)
        if res.status != "optimal":
            raise RuntimeError(f"Lipschitz-ball LP ended {res.status}")
        if ctx.gt(res.value, best):
            best = res.value
    return best


def linf_distance(t: Theory, f_approx: Measurement, f_ideal: Measurement):
    """Largest per-outcome probability gap over all states (vertex maximum)."""
    if tuple(f_approx.outcomes) != tuple(f_ideal.outcomes):
        raise ValueError("measurements must share one outcome set")
    best = t.ctx.zero()
    for v in t.vertices:
        for ea, ei in zip(f_approx.effects, f_ideal.effects):
            gap = abs(effect_eval(t, ea, v) - effect_eval(t, ei, v))
            if gap > best:
                best = gap
    return best


@dataclass(frozen=True)
class MinLeSum:
    value: object
    argmin: tuple


def min_le_sum(t: Theory, f: Measurement, g: Measurement) -> MinLeSum:
    """Minimum over states of LE(omega^F) + LE(omega^G).

    Each localization error is one minus a maximum of affine functions,
    hence concave; a concave sum attains its minimum at a vertex.
    """
    best, arg = None, None
    for v in t.vertices:
        le_f = 1 - max(effect_eval(t, e, v) for e in f.effects)
        le_g = 1 - max(effect_eval(t, e, v) for e in g.effects)
        s = le_f + le_g
        if best is None or s < best:
            best, arg = s, v
    return MinLeSum(value=best, argmin=arg)
