"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples of Python ints (``IntMatrix``); nothing in
this module touches floating point.  The Hermite normal form is row-style:
``H = U @ A`` is in row echelon form, every pivot is positive, and entries
above a pivot lie in ``[0, pivot)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional

from .errors import DimensionMismatch, ZeroVectorError

IntMatrix = tuple  # tuple[tuple[int, ...], ...]


def as_matrix(rows) -> IntMatrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def shape(A) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A) -> tuple:
    return tuple(zip(*A)) if A else ()


def matmul(A, B) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vec_gcd(v) -> int:
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def primitive_vector(v) -> tuple:
    """Divide an integer vector by the gcd of its entries."""
    g = vec_gcd(v)
    if g == 0:
        raise ZeroVectorError("ZeroVector: cannot primitivize the zero vector")
    return tuple(int(x) // g for x in v)


def primitive_direction(v) -> tuple:
    """Scale a rational vector to the primitive integer vector on its ray."""
    return primitive_vector(clear_denominators(v))


def clear_denominators(v) -> tuple:
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    return tuple(int(x * den) for x in v)


def normalize(x):
    """Return an int when a Fraction is integral."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def is_integral(v) -> bool:
    return all(not isinstance(x, Fraction) or x.denominator == 1 for x in v)


def exgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(A) -> tuple[IntMatrix, IntMatrix]:
    """Row-style HNF. Returns ``(H, U)`` with ``H = U A`` and ``U`` unimodular."""
    H = [list(map(int, r)) for r in A]
    m, n = shape(H)
    U = [list(r) for r in identity(m)]
    p = 0
    for col in range(n):
        if p == m:
            break
        for i in range(p + 1, m):
            a, b = H[p][col], H[i][col]
            if b == 0:
                continue
            g, x, y = exgcd(a, b)
            ag, bg = a // g, b // g
            H[p], H[i] = (
                [x * s + y * t for s, t in zip(H[p], H[i])],
                [-bg * s + ag * t for s, t in zip(H[p], H[i])],
            )
            U[p], U[i] = (
                [x * s + y * t for s, t in zip(U[p], U[i])],
                [-bg * s + ag * t for s, t in zip(U[p], U[i])],
            )
        piv = H[p][col]
        if piv == 0:
            continue
        if piv < 0:
            H[p] = [-s for s in H[p]]
            U[p] = [-s for s in U[p]]
            piv = -piv
        for r in range(p):
            q = H[r][col] // piv
            if q:
                H[r] = [s - q * t for s, t in zip(H[r], H[p])]
                U[r] = [s - q * t for s, t in zip(U[r], U[p])]
        p += 1
    return as_matrix(H), as_matrix(U)


def is_hermite_normal_form(H) -> bool:
    last = -1
    seen_zero = False
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        j = nz[0]
        if j <= last or row[j] <= 0:
            return False
        for r in range(i):
            if not 0 <= H[r][j] < row[j]:
                return False
        last = j
    return True


def smith_normal_form(A) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, U, V)`` with ``D = U A V`` diagonal and d1 | d2 | ... ."""
    D = [list(map(int, r)) for r in A]
    m, n = shape(D)
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // D[t][t]
                if q:
                    D[i] = [s - q * u for s, u in zip(D[i], D[t])]
                    U[i] = [s - q * u for s, u in zip(U[i], U[t])]
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // D[t][t]
                if q:
                    for row in D:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                if D[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            D[t] = [s + u for s, u in zip(D[t], D[bad])]
            U[t] = [s + u for s, u in zip(U[t], U[bad])]
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-s for s in D[t]]
            U[t] = [-s for s in U[t]]
    return as_matrix(D), as_matrix(U), as_matrix(V)


def invariant_factors(A) -> tuple[int, ...]:
    D, _, _ = smith_normal_form(A)
    return tuple(D[i][i] for i in range(min(shape(D))) if D[i][i])


def det(A) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    M = [list(map(int, r)) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(A) -> int:
    if not A:
        return 0
    H, _ = hermite_normal_form([clear_denominators(r) for r in A])
    return sum(1 for r in H if any(r))


def rref(A) -> tuple[tuple, tuple[int, ...]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    M = [[Fraction(x) for x in r] for r in A]
    m, n = shape(M)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return tuple(tuple(normalize(x) for x in row) for row in M[:r]), tuple(pivots)


def solve_rational(A, b) -> Optional[tuple]:
    """Some rational solution of A x = b, or None."""
    m, n = shape(A)
    if len(b) != m:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {m}")
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(R, piv):
        x[c] = Fraction(row[n])
    return tuple(normalize(v) for v in x)


def solve_integral(A, b) -> Optional[tuple]:
    """Some integral solution x of ``A x = b``, or ``None`` if none exists."""
    A = as_matrix(A)
    m, n = shape(A)
    if len(b) != m:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {m}")
    if n == 0:
        return () if not any(b) else None
    D, U, V = smith_normal_form(A)
    c = matvec(U, [int(x) for x in b])
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(V, y)


def kernel_basis(A, ncols: Optional[int] = None) -> IntMatrix:
    """Lattice basis (rows) of ``{x in Z^n : A x = 0}``; the kernel is saturated."""
    A = [clear_denominators(r) for r in A]
    n = ncols if ncols is not None else shape(A)[1]
    if not A:
        return identity(n)
    H, U = hermite_normal_form(transpose(A))
    return tuple(U[i] for i in range(n) if not any(H[i]))


def saturation(vectors, n: Optional[int] = None) -> IntMatrix:
    """Basis (rows, in HNF) of the saturated lattice ``span(vectors) ∩ Z^n``."""
    vectors = [clear_denominators(v) for v in vectors if any(v)]
    if n is None:
        n = len(vectors[0])
    if not vectors:
        return ()
    K = kernel_basis(vectors, n)
    B = kernel_basis(K, n) if K else identity(n)
    H, _ = hermite_normal_form(B)
    return tuple(r for r in H if any(r))


def lattice_basis(vectors) -> IntMatrix:
    """HNF basis (rows) of the lattice generated by integer vectors."""
    H, _ = hermite_normal_form([tuple(map(int, v)) for v in vectors])
    return tuple(r for r in H if any(r))


def complete_basis(rows, n: Optional[int] = None) -> IntMatrix:
    """Extend independent rows spanning a saturated lattice to a unimodular matrix.

    The given rows come first, unchanged.
    """
    rows = as_matrix(rows)
    if n is None:
        n = len(rows[0])
    k = len(rows)
    if k == 0:
        return identity(n)
    D, U, V = smith_normal_form(rows)
    if any(D[i][i] != 1 for i in range(k)):
        raise ValueError("rows do not extend to a lattice basis (not saturated or dependent)")
    Vinv = inverse_unimodular(V)
    return rows + tuple(Vinv[k:])


def inverse_unimodular(A) -> IntMatrix:
    n = len(A)
    inv = inverse_rational(A)
    if any(isinstance(x, Fraction) for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return as_matrix(inv) if n else ()


def inverse_rational(A) -> tuple:
    n = len(A)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug)
    if tuple(piv[:n]) != tuple(range(n)) or len(R) < n:
        raise ValueError("matrix is singular")
    return tuple(tuple(normalize(Fraction(x)) for x in row[n:]) for row in R)


def is_unimodular(A) -> bool:
    return len(A) == shape(A)[1] and abs(det(A)) == 1


def same_lattice(A, B) -> bool:
    """Do the row sets of A and B generate the same sublattice?"""
    return lattice_basis(A) == lattice_basis(B)


@dataclass(frozen=True)
class LatticeSplitting:
    """A splitting ``N = N̄ ⊕ N_U`` given by bases of the two summands.

    Columns of ``matrix`` are the N̄ basis followed by the N_U basis.  A point
    x of N has split coordinates ``(x̄, χ) = matrix^{-1} x``; a point of the
    dual lattice M has split coordinates ``matrix^T m``.
    """

    nbar: tuple
    nu: tuple

    def __post_init__(self):
        object.__setattr__(self, "nbar", as_matrix(self.nbar))
        object.__setattr__(self, "nu", as_matrix(self.nu))
        if not is_unimodular(self.matrix):
            raise ValueError("splitting bases do not form a basis of Z^n")

    @property
    def rank(self) -> int:
        return len(self.nbar) + len(self.nu)

    @property
    def dim_nbar(self) -> int:
        return len(self.nbar)

    @property
    def dim_nu(self) -> int:
        return len(self.nu)

    @property
    def matrix(self) -> IntMatrix:
        return transpose(self.nbar + self.nu)

    @property
    def inverse(self) -> IntMatrix:
        return inverse_unimodular(self.matrix)

    def split(self, x) -> tuple[tuple, tuple]:
        c = matvec(self.inverse, x)
        d = self.dim_nbar
        return c[:d], c[d:]

    def join(self, xbar, chi) -> tuple:
        return matvec(self.matrix, tuple(xbar) + tuple(chi))

    def split_dual(self, m) -> tuple[tuple, tuple]:
        c = matvec(transpose(self.matrix), m)
        d = self.dim_nbar
        return c[:d], c[d:]

    def join_dual(self, mbar, mu) -> tuple:
        return matvec(transpose(self.inverse), tuple(mbar) + tuple(mu))

    @classmethod
    def trivial(cls, n: int) -> "LatticeSplitting":
        return cls(identity(n), ())

    @classmethod
    def from_nbar(cls, nbar) -> "LatticeSplitting":
        nbar = as_matrix(nbar)
        full = complete_basis(nbar, len(nbar[0]))
        return cls(nbar, full[len(nbar):])

    @classmethod
    def from_nu(cls, nu, n: Optional[int] = None) -> "LatticeSplitting":
        """Complete an N_U basis; N̄ prefers standard basis vectors."""
        nu = as_matrix(nu)
        n = n if n is not None else len(nu[0])
        chosen: list = []
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            trial = list(nu) + chosen + [e]
            if rank(trial) == len(trial) and _saturated(trial):
                chosen.append(e)
        if len(chosen) + len(nu) != n:
            full = complete_basis(nu, n)
            chosen = list(full[len(nu):])
        return cls(tuple(chosen), nu)


def _saturated(rows) -> bool:
    return all(d == 1 for d in invariant_factors(rows))
