"""Independent oracles shared across test modules.

These deliberately avoid the library's own code paths: membership goes
through exhaustive facet enumeration, groups through a raw permutation
search, so the LP/double-description implementations have something
honest to be compared against.
"""

from itertools import combinations, permutations

from gptlab.scalars import Context, dot, mat_vec, rank, solve, transpose


def facet_normals_bruteforce(generators, ctx: Context):
    """Facet normals of a full-dimensional cone by exhaustive subsets.

    Every (d-1)-subset of generators spanning a (d-1)-dimensional space
    contributes its orthogonal direction when all generators lie on one
    side.  Only valid for cones whose generators span the ambient space.
    """
    d = len(generators[0])
    normals = []
    for subset in combinations(range(len(generators)), d - 1):
        rows = [generators[i] for i in subset]
        if rank(rows, ctx) != d - 1:
            continue
        normal = _null_direction(rows, ctx)
        if normal is None:
            continue
        signs = {ctx.sign(dot(normal, g)) for g in generators}
        if -1 in signs and 1 in signs:
            continue
        if -1 in signs:
            normal = tuple(-a for a in normal)
        if not any(_same_direction(normal, m, ctx) for m in normals):
            normals.append(normal)
    return normals


def _null_direction(rows, ctx: Context):
    """A nonzero vector orthogonal to all rows (rows have rank d-1)."""
    d = len(rows[0])
    # solve rows . x = 0 by fixing one free coordinate to 1
    for free in range(d):
        cols = [c for c in range(d) if c != free]
        a = [[row[c] for c in cols] for row in rows]
        b = [-row[free] for row in rows]
        if rank(a, ctx) != d - 1:
            continue
        # reduce to a square solvable system by picking d-1 independent rows
        chosen = []
        for r in range(len(a)):
            if rank([a[i] for i in chosen] + [a[r]], ctx) > len(chosen):
                chosen.append(r)
            if len(chosen) == d - 1:
                break
        sol = solve([a[i] for i in chosen], [b[i] for i in chosen], ctx)
        if sol is None:
            continue
        vec = [0] * d
        vec[free] = ctx.one()
        for c, v in zip(cols, sol):
            vec[c] = v
        return tuple(vec)
    return None


def _same_direction(x, y, ctx: Context) -> bool:
    # proportional with a positive factor
    pivot = None
    for a, b in zip(x, y):
        if not ctx.is_zero(a) and not ctx.is_zero(b):
            pivot = a / b
            break
        if ctx.is_zero(a) != ctx.is_zero(b):
            return False
    if pivot is None or ctx.le(pivot, 0):
        return False
    return all(ctx.eq(a, pivot * b) for a, b in zip(x, y))


def member_bruteforce(generators, x, ctx: Context) -> bool:
    """Facet-based membership for a cone spanning the full space."""
    d = len(generators[0])
    if rank(generators, ctx) < d:
        raise ValueError("brute-force membership oracle needs a full-dimensional cone")
    normals = facet_normals_bruteforce(generators, ctx)
    return all(ctx.ge(dot(n, x), 0) for n in normals)


def automorphism_orders_bruteforce(vertices, ctx: Context) -> int:
    """Count vertex permutations extending to linear maps fixing the set."""
    nv = len(vertices)
    d = len(vertices[0])
    span = []
    for i in range(nv):
        if rank([vertices[j] for j in span] + [vertices[i]], ctx) > len(span):
            span.append(i)
        if len(span) == d:
            break
    from gptlab.scalars import inverse, mat_mul

    base = inverse(transpose([vertices[i] for i in span]), ctx)
    count = 0
    for perm in permutations(range(nv)):
        img = transpose([vertices[perm[i]] for i in span])
        t_mat = mat_mul(img, base)
        if all(ctx.vec_eq(mat_vec(t_mat, vertices[j]), vertices[perm[j]]) for j in range(nv)):
            count += 1
    return count
