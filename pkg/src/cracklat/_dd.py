"""Double description: generators of the cone {x : A x >= 0}."""
from .kernels import adjacent_pairs
from .lattice import dot, lattice_basis, primitive_vector, saturation


def _prim(v):
    return primitive_vector(v) if any(v) else None


def cone_rays(A, d):
    """Return ``(rays, lineality)`` of ``{x in Q^d : a . x >= 0 for a in A}``.

    Rays are primitive integer vectors spanning the cone modulo the lineality
    space; lineality is a saturated integer basis of the lineality space.
    Both are returned sorted so results are deterministic.
    """
    lin = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    rays = []
    masks = []
    for k, a in enumerate(A):
        a = tuple(a)
        if not any(a):
            continue
        bit = 1 << k
        hit = next((i for i, l in enumerate(lin) if dot(a, l)), None)
        if hit is not None:
            l0 = lin.pop(hit)
            alpha = dot(a, l0)
            if alpha < 0:
                l0 = tuple(-x for x in l0)
                alpha = -alpha
            new_lin = []
            for l in lin:
                v = dot(a, l)
                w = _prim(tuple(alpha * x - v * y for x, y in zip(l, l0))) if v else l
                new_lin.append(w)
            lin = new_lin
            new_rays, new_masks = [], []
            for r, z in zip(rays, masks):
                v = dot(a, r)
                w = _prim(tuple(alpha * x - v * y for x, y in zip(r, l0))) if v else r
                new_rays.append(w)
                new_masks.append(z | bit)
            new_rays.append(l0)
            new_masks.append(bit - 1)
            rays, masks = new_rays, new_masks
            continue
        vals = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            masks = [z | bit if v == 0 else z for z, v in zip(masks, vals)]
            continue
        new_rays, new_masks = [], []
        for i, v in enumerate(vals):
            if v >= 0:
                new_rays.append(rays[i])
                new_masks.append(masks[i] | bit if v == 0 else masks[i])
        for i, j in adjacent_pairs(pos, neg, masks):
            vp, vn = vals[i], vals[j]
            w = _prim(tuple(vp * y - vn * x for x, y in zip(rays[i], rays[j])))
            new_rays.append(w)
            new_masks.append((masks[i] & masks[j]) | bit)
        rays, masks = new_rays, new_masks
    lin = lattice_basis(saturation(lin, d)) if lin else ()
    return tuple(sorted(set(rays))), tuple(lin)


def cone_rays_with_zero_sets(A, d):
    """Like :func:`cone_rays` but also return, per ray, the set of tight rows."""
    rays, lin = cone_rays(A, d)
    zs = [frozenset(i for i, a in enumerate(A) if dot(a, r) == 0) for r in rays]
    return rays, lin, zs
