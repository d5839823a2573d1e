"""Pure-Python reference versions of the hot kernels."""
from itertools import product

BACKEND = "python"


def adjacent_pairs(pos, neg, masks):
    """Pairs (i, j) of positive/negative rays that span a 2-face.

    ``pos`` and ``neg`` are lists of indices into ``masks`` (zero-set bitmasks).
    The pair is adjacent when no third ray's zero set contains the
    intersection of theirs.
    """
    out = []
    n = len(masks)
    for i in pos:
        zi = masks[i]
        for j in neg:
            z = zi & masks[j]
            for t in range(n):
                if t != i and t != j and masks[t] & z == z:
                    break
            else:
                out.append((i, j))
    return out


def matmul_int(A, B):
    """Exact product of integer matrices given as lists of rows."""
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def box_points(lo, hi, A, c):
    """Integer points x with lo <= x <= hi and A x >= c, in lexicographic order."""
    out = []
    for x in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        ok = True
        for row, ci in zip(A, c):
            s = 0
            for a, xi in zip(row, x):
                s += a * xi
            if s < ci:
                ok = False
                break
        if ok:
            out.append(x)
    return out
