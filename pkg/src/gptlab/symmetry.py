"""State-space symmetries, canonical coordinates, and self-duality.

The linear automorphism group of a polytopic state space is finite
whenever the vertices span the ambient space, so the invariant (Haar)
average becomes a uniform average over the group elements.  That average
yields the invariant inner product, the maximally mixed state, the
projection onto the invariant subspace, and the canonical (Bloch)
coordinates in which the unit effect coincides with the maximally mixed
state.

For built-in theories the group is written down in closed form
(permutation matrices for simplices, the dihedral group for polygons).
For user theories a backtracking search over vertex permutations is run,
pruned by the congruence-invariant form Q = sum_i v_i v_i^T; each
surviving permutation is extended to a linear map on a spanning subset
and verified on every remaining vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .cones import cone_member, cones_equal, dual_cone
from .model import Theory, theory_to_float
from .scalars import (
    Context,
    FLOAT,
    InnerProduct,
    dot,
    identity,
    inverse,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_vec,
    rank,
    sqrt_scalar,
    transpose,
    vscale,
    vsub,
)


@dataclass(frozen=True)
class SymmetryGroup:
    """Finite matrix group together with its action on the vertex list."""

    elements: tuple  # matrices
    perms: tuple  # vertex permutations aligned with elements

    @property
    def order(self) -> int:
        return len(self.elements)


def _perm_of_matrix(t_mat, vertices, ctx) -> Optional[tuple]:
    imgs = [mat_vec(t_mat, v) for v in vertices]
    perm = []
    for img in imgs:
        hit = -1
        for j, v in enumerate(vertices):
            if ctx.vec_eq(img, v):
                hit = j
                break
        if hit < 0:
            return None
        perm.append(hit)
    if sorted(perm) != list(range(len(vertices))):
        return None
    return tuple(perm)


def _dihedral_group(t: Theory) -> SymmetryGroup:
    n = t.n
    ctx = t.ctx
    mats, perms = [], []
    for k in range(n):
        c, s = math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)
        mats.append(((c, -s, 0.0), (s, c, 0.0), (0.0, 0.0, 1.0)))
        perms.append(tuple((i + k) % n for i in range(n)))
    for k in range(n):
        # reflection across the axis at angle pi*k/n
        c, s = math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)
        mats.append(((c, s, 0.0), (s, -c, 0.0), (0.0, 0.0, 1.0)))
        perms.append(tuple((k - i) % n for i in range(n)))
    for m, p in zip(mats, perms):
        if _perm_of_matrix(m, t.vertices, ctx) != p:
            raise RuntimeError("dihedral closed form does not act as expected")
    return SymmetryGroup(tuple(mats), tuple(perms))


def _permutation_group(t: Theory) -> SymmetryGroup:
    import itertools

    d = t.dim
    ctx = t.ctx
    one, zero = ctx.one(), ctx.zero()
    mats, perms = [], []
    for perm in itertools.permutations(range(d)):
        mats.append(tuple(tuple(one if perm[i] == j else zero for j in range(d)) for i in range(d)))
        perms.append(perm)
    return SymmetryGroup(tuple(mats), tuple(perms))


def automorphism_group(t: Theory, force_search: bool = False) -> SymmetryGroup:
    """All linear bijections mapping the state space onto itself.

    Built-ins use closed forms; anything else runs the permutation
    backtracking search.
    """
    if t.group_cache is not None and not force_search:
        return t.group_cache
    if not force_search and not t.canonicalized:
        if t.kind == "classical":
            return _permutation_group(t)
        if t.kind in ("polygon", "polygon-psi"):
            return _dihedral_group(t)
    return _search_group(t)


def _search_group(t: Theory) -> SymmetryGroup:
    ctx = t.ctx
    verts = t.vertices
    nv = len(verts)
    d = t.dim
    q = None
    for v in verts:
        vvt = tuple(tuple(a * b for b in v) for a in v)
        q = vvt if q is None else mat_add(q, vvt)
    qinv = inverse(q, ctx)
    if qinv is None:
        raise ValueError("vertices do not span the ambient space")
    m = [[dot(verts[i], mat_vec(qinv, verts[j])) for j in range(nv)] for i in range(nv)]

    span_idx: list[int] = []
    for i in range(nv):
        if rank([verts[j] for j in span_idx] + [verts[i]], ctx) > len(span_idx):
            span_idx.append(i)
        if len(span_idx) == d:
            break
    basis_cols = transpose([verts[i] for i in span_idx])
    basis_inv = inverse(basis_cols, ctx)

    found_mats, found_perms = [], []
    perm = [-1] * nv
    used = [False] * nv

    def extend(i: int) -> None:
        if i == nv:
            _materialize(tuple(perm))
            return
        for c in range(nv):
            if used[c] or not ctx.eq(m[c][c], m[i][i]):
                continue
            if all(ctx.eq(m[perm[j]][c], m[j][i]) for j in range(i)):
                perm[i] = c
                used[c] = True
                extend(i + 1)
                used[c] = False
                perm[i] = -1

    def _materialize(p: tuple) -> None:
        # linear extension from the spanning subset, then full verification
        img_cols = transpose([verts[p[i]] for i in span_idx])
        t_mat = mat_mul(img_cols, basis_inv)
        for j in range(nv):
            if not ctx.vec_eq(mat_vec(t_mat, verts[j]), verts[p[j]]):
                return
        found_mats.append(tuple(tuple(row) for row in t_mat))
        found_perms.append(p)

    extend(0)
    return SymmetryGroup(tuple(found_mats), tuple(found_perms))


def is_transitive(g: SymmetryGroup, t: Theory) -> bool:
    """Does the orbit of vertex 0 cover the whole vertex set?"""
    orbit = {p[0] for p in g.perms}
    return len(orbit) == t.n_vertices


def maximally_mixed(t: Theory, g: Optional[SymmetryGroup] = None):
    """The unique invariant state: the average of the pure states."""
    if g is None:
        g = automorphism_group(t)
    if not is_transitive(g, t):
        raise ValueError("maximally mixed state requires a transitive theory")
    ctx = t.ctx
    total = t.vertices[0]
    for v in t.vertices[1:]:
        total = tuple(a + b for a, b in zip(total, v))
    k = ctx.convert(t.n_vertices)
    omega_m = tuple(a / k for a in total)
    for mat in g.elements:
        if not ctx.vec_eq(mat_vec(mat, omega_m), omega_m):
            raise RuntimeError("group element does not fix the vertex average")
    return omega_m


def rescale_unit_norm(t: Theory, g: Optional[SymmetryGroup] = None) -> Theory:
    """Rescale so the maximally mixed state has Euclidean norm 1.

    Exact theories whose rescaling factor is irrational are demoted to
    float mode first; the rescaled theory is reported in whichever mode
    can represent it.
    """
    if g is None:
        g = automorphism_group(t)
    omega_m = maximally_mixed(t, g)
    ctx = t.ctx
    norm2 = sum(a * a for a in omega_m)
    if ctx.eq(norm2, 1):
        return t
    try:
        scale = 1 / sqrt_scalar(norm2, ctx)
    except ValueError:
        t = theory_to_float(t)
        ctx = t.ctx
        scale = 1 / math.sqrt(float(norm2))
        g = SymmetryGroup(tuple(tuple(tuple(float(a) for a in r) for r in m) for m in g.elements), g.perms)
    return replace(
        t,
        vertices=tuple(vscale(scale, v) for v in t.vertices),
        unit_effect=vscale(1 / scale, t.unit_effect),
        canonicalized=False,
        group_cache=g,
    )


def averaged_inner_product(g: SymmetryGroup, ctx: Context = FLOAT) -> InnerProduct:
    """Group average of the Euclidean inner product: gram = avg T^T T."""
    if not g.elements:
        raise ValueError("empty group")
    d = len(g.elements[0])
    total = None
    for mat in g.elements:
        term = mat_mul(transpose(mat), mat)
        total = term if total is None else mat_add(total, term)
    return InnerProduct(mat_scale(1 / ctx.convert(g.order), total))


def projector_pm(g: SymmetryGroup, ctx: Context = FLOAT):
    """Group average of the elements themselves: the invariant projection."""
    if not g.elements:
        raise ValueError("empty group")
    total = None
    for mat in g.elements:
        total = mat if total is None else mat_add(total, mat)
    return mat_scale(1 / ctx.convert(g.order), total)


@dataclass
class CanonicalForm:
    """Orthonormal invariant coordinates with the mixed state as last axis."""

    basis: tuple  # rows of the rescaled-raw-coordinate basis, last = omega_M
    transform: tuple  # old (rescaled) coordinates -> canonical coordinates
    theory: Theory  # canonical theory: identity pairing, u = omega_M = (0,..,0,1)
    group: SymmetryGroup


def canonicalize(t: Theory) -> CanonicalForm:
    """Bloch coordinates: identity pairing, unit effect = mixed state axis.

    The output theory always lives in float mode because the orthonormal
    basis involves square roots.  The first in-plane basis vector is
    aligned with (vertex0 - omega_M) to make the form deterministic.
    """
    g = automorphism_group(t)
    if not is_transitive(g, t):
        raise ValueError("canonicalization requires a transitive theory")
    tf = theory_to_float(t)
    ctx = tf.ctx
    gf = SymmetryGroup(
        tuple(tuple(tuple(float(a) for a in row) for row in m) for m in g.elements), g.perms
    )
    tf = tf.with_group(gf)
    tf = rescale_unit_norm(tf, gf)
    omega_m = maximally_mixed(tf, gf)
    gram = averaged_inner_product(gf, ctx)

    d = tf.dim
    basis = []
    for v in tf.vertices:
        cand = vsub(v, omega_m)
        for b in basis:
            c = gram.pair(b, cand)
            cand = vsub(cand, vscale(c, b))
        nrm2 = gram.norm2(cand)
        if ctx.gt(nrm2, 0):
            basis.append(vscale(1 / math.sqrt(nrm2), cand))
        if len(basis) == d - 1:
            break
    if len(basis) != d - 1:
        raise RuntimeError("could not build an in-plane orthonormal basis")
    basis.append(omega_m)

    transform = tuple(tuple(mat_vec(gram.gram, b)) for b in basis)  # rows b_l^T G
    inv_t = inverse(transform, ctx)
    new_vertices = tuple(mat_vec(transform, v) for v in tf.vertices)
    # effects map contravariantly: e_new = (M^-1)^T . inner . e
    inv_tt = transpose(inv_t)
    new_u = mat_vec(inv_tt, mat_vec(tf.inner.gram, tf.unit_effect))
    new_group = SymmetryGroup(
        tuple(mat_mul(mat_mul(transform, m), inv_t) for m in gf.elements), gf.perms
    )
    theory_c = replace(
        tf,
        name=t.name if t.canonicalized else f"{t.name}-canonical",
        vertices=new_vertices,
        unit_effect=tuple(new_u),
        inner=InnerProduct.euclidean(d, ctx),
        canonicalized=True,
        group_cache=new_group,
    )
    return CanonicalForm(basis=tuple(basis), transform=transform, theory=theory_c, group=new_group)


def is_self_dual(t: Theory, gram: Optional[InnerProduct] = None) -> bool:
    """Is the positive cone equal to its internal dual under the given product?

    Defaults to the group-averaged inner product of the theory.
    """
    if gram is None:
        gram = averaged_inner_product(automorphism_group(t), t.ctx)
    return cones_equal(t.cone, dual_cone(t.cone, gram, t.ctx), t.ctx)


def xi_canonicalize(t: Theory, j_map, g: Optional[SymmetryGroup] = None) -> Theory:
    """Re-express a transitive self-dual theory so the cone equals its dual.

    ``j_map`` must be strictly positive with respect to the averaged inner
    product and map the positive cone onto its internal dual.  The group
    average of its conjugates collapses to P_M + xi P_M^perp; the square
    root of that map is applied to the state space, after which the cone
    is self-dual with respect to the averaged product of the result.
    """
    if g is None:
        g = automorphism_group(t)
    if not is_transitive(g, t):
        raise ValueError("xi canonicalization requires a transitive theory")
    ctx = t.ctx
    gram = averaged_inner_product(g, ctx)
    d = t.dim

    # validation: symmetry and strict positivity w.r.t. the averaged product
    gj = mat_mul(gram.gram, j_map)
    if not InnerProduct(gj).is_symmetric(ctx):
        raise ValueError("J is not self-adjoint for the averaged inner product")
    if not InnerProduct(gj).is_positive_definite(ctx):
        raise ValueError("J is not strictly positive for the averaged inner product")
    dual = dual_cone(t.cone, gram, ctx)
    jinv = inverse(j_map, ctx)
    for v in t.vertices:
        if not cone_member(dual, mat_vec(j_map, v), ctx):
            raise ValueError("J does not map the positive cone into the dual cone")
    for ray in dual.generators:
        if not cone_member(t.cone, mat_vec(jinv, ray), ctx):
            raise ValueError("J does not map the positive cone onto the dual cone")

    omega_m = maximally_mixed(t, g)
    # normalize so the invariant component of the average has coefficient one;
    # an overall positive scaling of J never changes cone images
    c = gram.pair(omega_m, mat_vec(j_map, omega_m)) / gram.norm2(omega_m)
    if not ctx.gt(c, 0):
        raise ValueError("J is not positive on the maximally mixed state")
    j_norm = mat_scale(1 / c, j_map)

    total = None
    for mat in g.elements:
        minv = inverse(mat, ctx)
        term = mat_mul(minv, mat_mul(j_norm, mat))
        total = term if total is None else mat_add(total, term)
    j_av = mat_scale(1 / ctx.convert(g.order), total)

    pm = projector_pm(g, ctx)
    pperp = mat_sub(identity(d, ctx), pm)
    trace_perp = sum(pperp[i][i] for i in range(d))
    if ctx.is_zero(trace_perp):
        raise ValueError("invariant complement is trivial")
    xi = sum(mat_mul(j_av, pperp)[i][i] for i in range(d)) / trace_perp
    model = mat_add(pm, mat_scale(xi, pperp))
    scale = max(1.0, abs(float(xi)))
    resid = max(
        abs(float(j_av[i][k] - model[i][k])) for i in range(d) for k in range(d)
    )
    # the two-block form is exact for transitive inputs; 1e-7 relative spread
    if resid > 1e-7 * scale:
        raise ValueError(
            f"averaged J is not of the form P_M + xi P_perp (residual {resid:.3e}); "
            "the input is not transitive or J is malformed"
        )

    try:
        sq = sqrt_scalar(xi, ctx)
        tt = t
    except ValueError:
        tt = theory_to_float(t)
        ctx = tt.ctx
        pm = tuple(tuple(float(a) for a in row) for row in pm)
        pperp = tuple(tuple(float(a) for a in row) for row in pperp)
        sq = math.sqrt(float(xi))
    xi_mat = mat_add(pm, mat_scale(sq, pperp))
    xi_inv = inverse(xi_mat, ctx)
    inner_g = tt.inner.gram
    inner_inv = inverse(inner_g, ctx)
    new_u = mat_vec(inner_inv, mat_vec(transpose(xi_inv), mat_vec(inner_g, tt.unit_effect)))
    return replace(
        tt,
        name=f"{t.name}-xi",
        vertices=tuple(mat_vec(xi_mat, v) for v in tt.vertices),
        unit_effect=tuple(new_u),
        canonicalized=False,
        group_cache=SymmetryGroup(g.elements, g.perms) if ctx is t.ctx else None,
    )
