"""GPT theories: state spaces, effects, measurements, built-in models.

A theory is a polytopic state space given by its pure states (vertices)
in R^(N+1), together with the unit effect and the pairing used to
evaluate effects on states.  Built-in constructors cover classical
simplices (exact rational mode) and regular polygon theories (float
mode, since the vertex coordinates involve cos/sin).

Effects are plain coordinate tuples; ``effect_eval`` evaluates them
through the theory's pairing.  After canonicalisation the pairing is the
identity, so evaluation is an ordinary dot product.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

from .cones import Cone, affine_hull_check, cone_member, dual_cone
from .linprog import EQ, LinearProgram, lp_feasible
from .scalars import (
    Context,
    EXACT,
    FLOAT,
    InnerProduct,
    dot,
    float_mat,
    float_vec,
    identity,
    mat_vec,
    transpose,
    vadd,
    vscale,
)

if TYPE_CHECKING:
    from .measures import FiniteMetricSpace
    from .symmetry import SymmetryGroup


@dataclass
class Theory:
    """A polytopic state space with unit effect and evaluation pairing."""

    name: str
    vertices: tuple
    unit_effect: tuple
    inner: InnerProduct
    ctx: Context
    kind: str = "custom"  # "classical" | "polygon" | "polygon-psi" | "custom"
    n: Optional[int] = None  # polygon side count / classical N
    canonicalized: bool = False
    group_cache: Optional["SymmetryGroup"] = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        """Ambient dimension N+1."""
        return len(self.vertices[0])

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def cone(self) -> Cone:
        """Positive cone: rays over the pure states."""
        return Cone(self.vertices)

    def with_group(self, group) -> "Theory":
        return replace(self, group_cache=group)


@dataclass
class Measurement:
    """Labelled effects summing to the unit effect, plus an outcome metric."""

    outcomes: tuple
    effects: tuple
    metric: Optional["FiniteMetricSpace"] = None

    def __post_init__(self):
        if len(self.outcomes) != len(self.effects):
            raise ValueError("outcomes and effects must align")
        self.outcomes = tuple(self.outcomes)
        self.effects = tuple(tuple(e) for e in self.effects)

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    def effect(self, label):
        return self.effects[self.outcomes.index(label)]


def effect_eval(t: Theory, e, omega, check_state: bool = False):
    """Probability of the effect on a state: <e, omega> under t.inner."""
    if len(e) != t.dim or len(omega) != t.dim:
        raise ValueError("dimension mismatch")
    if check_state and not in_state_space(t, omega):
        raise ValueError("omega is not a state of the theory")
    return t.inner.pair(e, omega)


def in_state_space(t: Theory, omega) -> bool:
    """Convex-combination LP over the vertices."""
    ctx = t.ctx
    k = t.n_vertices
    p = LinearProgram(n_vars=k, objective=[ctx.zero()] * k, lower=ctx.zero())
    cols = transpose(t.vertices)
    for i in range(t.dim):
        p.add(cols[i], EQ, omega[i])
    p.add([ctx.one()] * k, EQ, ctx.one())
    return lp_feasible(p, ctx).feasible


def is_valid_effect(t: Theory, e) -> bool:
    """0 <= e(omega) <= 1 on every vertex; enough by convexity."""
    ctx = t.ctx
    for v in t.vertices:
        val = effect_eval(t, e, v)
        if not (ctx.ge(val, 0) and ctx.le(val, 1)):
            return False
    return True


def is_zero_effect(t: Theory, e) -> bool:
    return all(t.ctx.is_zero(a) for a in e)


def measurement_violations(t: Theory, m: Measurement) -> list:
    """Human-readable list of violated measurement invariants (empty = valid)."""
    ctx = t.ctx
    problems = []
    if m.n_outcomes < 2:
        problems.append("trivial measurement: fewer than 2 outcomes")
    total = m.effects[0]
    for e in m.effects[1:]:
        total = vadd(total, e)
    if not ctx.vec_eq(total, t.unit_effect):
        problems.append("effects do not sum to the unit effect")
    for label, e in zip(m.outcomes, m.effects):
        if is_zero_effect(t, e):
            problems.append(f"effect for outcome {label!r} is zero")
        elif not is_valid_effect(t, e):
            problems.append(f"effect for outcome {label!r} is not in the effect space")
    return problems


def validate_measurement(t: Theory, m: Measurement) -> bool:
    return not measurement_violations(t, m)


def assert_valid_measurement(t: Theory, m: Measurement) -> None:
    problems = measurement_violations(t, m)
    if problems:
        raise ValueError("invalid measurement: " + "; ".join(problems))


def effect_space_member(t: Theory, e) -> bool:
    """Duality route: e and u - e both in the internal dual cone of V+."""
    dual = dual_cone(t.cone, t.inner, t.ctx)
    u_minus_e = tuple(u - a for u, a in zip(t.unit_effect, e))
    ok_e = is_zero_effect(t, e) or cone_member(dual, e, t.ctx)
    ok_c = is_zero_effect(t, u_minus_e) or cone_member(dual, u_minus_e, t.ctx)
    return ok_e and ok_c


def validate_theory(t: Theory) -> None:
    """Check the structural invariants; raises ValueError on the first failure."""
    ctx = t.ctx
    if not t.vertices:
        raise ValueError("theory has no vertices")
    dims = {len(v) for v in t.vertices}
    if dims != {t.dim} or len(t.unit_effect) != t.dim:
        raise ValueError("inconsistent ambient dimensions")
    if not t.inner.is_positive_definite(ctx):
        raise ValueError("pairing gram matrix is not symmetric positive definite")
    for v in t.vertices:
        if not ctx.eq(effect_eval(t, t.unit_effect, v), 1):
            raise ValueError(f"unit effect does not evaluate to 1 on vertex {v}")
    hull = affine_hull_check(t.vertices, ctx)
    if not hull.origin_outside:
        raise ValueError("affine hull of the state space contains the origin")
    if hull.dim != t.dim - 1:
        raise ValueError(
            f"affine dimension {hull.dim} does not match ambient dimension {t.dim}"
        )
    for i in range(t.n_vertices):
        if not _vertex_extreme(t, i):
            raise ValueError(f"vertex {i} is a convex combination of the others")


def _vertex_extreme(t: Theory, i: int) -> bool:
    ctx = t.ctx
    others = [v for j, v in enumerate(t.vertices) if j != i]
    if not others:
        return True
    k = len(others)
    p = LinearProgram(n_vars=k, objective=[ctx.zero()] * k, lower=ctx.zero())
    cols = transpose(others)
    for r in range(t.dim):
        p.add(cols[r], EQ, t.vertices[i][r])
    p.add([ctx.one()] * k, EQ, ctx.one())
    return not lp_feasible(p, ctx).feasible


# ---------------------------------------------------------------------------
# built-in theories

def make_classical(n_levels: int) -> Theory:
    """Classical theory on N+1 levels: the N-dimensional standard simplex."""
    if n_levels < 1:
        raise ValueError("classical theory needs N >= 1")
    d = n_levels + 1
    ctx = EXACT
    vertices = tuple(
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(d)) for i in range(d)
    )
    u = tuple(Fraction(1) for _ in range(d))
    return Theory(
        name=f"classical-{n_levels}",
        vertices=vertices,
        unit_effect=u,
        inner=InnerProduct.euclidean(d, ctx),
        ctx=ctx,
        kind="classical",
        n=n_levels,
    )


def polygon_radius(n: int) -> float:
    return math.sqrt(1.0 / math.cos(math.pi / n))


def make_polygon(n: int) -> Theory:
    """Regular polygon theory with n sides (float mode: cos/sin coordinates)."""
    if n < 3:
        raise ValueError("polygon theory needs n >= 3")
    r = polygon_radius(n)
    vertices = tuple(
        (r * math.cos(2 * math.pi * i / n), r * math.sin(2 * math.pi * i / n), 1.0)
        for i in range(n)
    )
    return Theory(
        name=f"polygon-{n}",
        vertices=vertices,
        unit_effect=(0.0, 0.0, 1.0),
        inner=InnerProduct.euclidean(3, FLOAT),
        ctx=FLOAT,
        kind="polygon",
        n=n,
    )


def make_disc_approx(m: int) -> Theory:
    """Finite inner approximation of the disc theory by an m-gon (m >= 8)."""
    if m < 8:
        raise ValueError("disc approximation needs m >= 8")
    t = make_polygon(m)
    return replace(t, name=f"disc-approx-{m}")


def theory_to_float(t: Theory) -> Theory:
    """Demote an exact theory to float mode (idempotent)."""
    if not t.ctx.exact:
        return t
    return replace(
        t,
        vertices=tuple(float_vec(v) for v in t.vertices),
        unit_effect=float_vec(t.unit_effect),
        inner=InnerProduct(float_mat(t.inner.gram)),
        ctx=FLOAT,
        group_cache=None,
    )


# ---------------------------------------------------------------------------
# JSON interchange
#
# Theory files: {"name": str, "dim": int, "vertices": [[num|"p/q", ...], ...],
#                "unit_effect": [num|"p/q", ...]}
# Entries that are ints or "p/q" strings load exactly; any bare float makes
# the whole theory run in float mode.

def _num_to_json(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return float(x)


def _num_from_json(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return float(x)


def theory_to_dict(t: Theory) -> dict:
    return {
        "name": t.name,
        "dim": t.dim,
        "vertices": [[_num_to_json(a) for a in v] for v in t.vertices],
        "unit_effect": [_num_to_json(a) for a in t.unit_effect],
    }


def theory_from_dict(data: dict, validate: bool = True) -> Theory:
    raw_vertices = [[_num_from_json(a) for a in v] for v in data["vertices"]]
    raw_u = [_num_from_json(a) for a in data["unit_effect"]]
    entries = [a for v in raw_vertices for a in v] + list(raw_u)
    exact = all(isinstance(a, Fraction) for a in entries)
    ctx = EXACT if exact else FLOAT
    t = Theory(
        name=data.get("name", "theory"),
        vertices=tuple(ctx.vec(v) for v in raw_vertices),
        unit_effect=ctx.vec(raw_u),
        inner=InnerProduct.euclidean(int(data["dim"]), ctx),
        ctx=ctx,
        kind=data.get("kind", "custom"),
        n=data.get("n"),
    )
    if int(data["dim"]) != t.dim:
        raise ValueError("declared dim does not match vertex length")
    if validate:
        validate_theory(t)
    return t


def save_theory(t: Theory, path) -> None:
    with open(path, "w") as fh:
        json.dump(theory_to_dict(t), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_theory(path, validate: bool = True) -> Theory:
    with open(path) as fh:
        return theory_from_dict(json.load(fh), validate=validate)


def measurement_to_dict(m: Measurement) -> dict:
    out = {
        "outcomes": list(m.outcomes),
        "effects": [[_num_to_json(a) for a in e] for e in m.effects],
    }
    if m.metric is not None:
        out["metric"] = {
            "points": list(m.metric.points),
            "dist": [[_num_to_json(a) for a in row] for row in m.metric.dist],
        }
    return out


def measurement_from_dict(data: dict, ctx: Context) -> Measurement:
    from .measures import FiniteMetricSpace

    metric = None
    if "metric" in data:
        md = data["metric"]
        metric = FiniteMetricSpace(
            points=tuple(md["points"]),
            dist=tuple(tuple(ctx.convert(_num_from_json(a)) for a in row) for row in md["dist"]),
        )
    return Measurement(
        outcomes=tuple(data["outcomes"]),
        effects=tuple(tuple(ctx.convert(_num_from_json(a)) for a in e) for e in data["effects"]),
        metric=metric,
    )


def load_measurement(path, ctx: Context) -> Measurement:
    with open(path) as fh:
        return measurement_from_dict(json.load(fh), ctx)


def save_measurement(m: Measurement, path) -> None:
    with open(path, "w") as fh:
        json.dump(measurement_to_dict(m), fh, indent=2, sort_keys=True)
        fh.write("\n")
