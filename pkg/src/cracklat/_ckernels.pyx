# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels working in int64 / uint64 bitsets."""
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free

BACKEND = "cython"

cdef extern from *:
    """
    static int add_ovf(long long a, long long b, long long *r) { return __builtin_saddll_overflow(a, b, r); }
    static int mul_ovf(long long a, long long b, long long *r) { return __builtin_smulll_overflow(a, b, r); }
    """
    int add_ovf(long long a, long long b, long long *r) nogil
    int mul_ovf(long long a, long long b, long long *r) nogil


def adjacent_pairs(pos, neg, masks):
    cdef Py_ssize_t n = len(masks), i, j, t, w, k, ip, jn
    cdef Py_ssize_t nwords = 1
    cdef uint64_t *bits
    cdef uint64_t z
    cdef bint contained
    mx = 0
    for m in masks:
        if m > mx:
            mx = m
    nwords = max(1, (mx.bit_length() + 63) // 64)
    bits = <uint64_t *> malloc(n * nwords * sizeof(uint64_t))
    if bits == NULL:
        raise MemoryError()
    cdef uint64_t *zz = <uint64_t *> malloc(nwords * sizeof(uint64_t))
    if zz == NULL:
        free(bits)
        raise MemoryError()
    out = []
    try:
        for i in range(n):
            m = masks[i]
            for w in range(nwords):
                bits[i * nwords + w] = <uint64_t> (m & 0xFFFFFFFFFFFFFFFF)
                m >>= 64
        for ip in pos:
            i = ip
            for jn in neg:
                j = jn
                for w in range(nwords):
                    zz[w] = bits[i * nwords + w] & bits[j * nwords + w]
                contained = False
                for t in range(n):
                    if t == i or t == j:
                        continue
                    contained = True
                    for w in range(nwords):
                        if (bits[t * nwords + w] & zz[w]) != zz[w]:
                            contained = False
                            break
                    if contained:
                        break
                if not contained:
                    out.append((ip, jn))
    finally:
        free(bits)
        free(zz)
    return out


def matmul_int(A, B):
    cdef Py_ssize_t m = len(A), k = len(B), n = len(B[0]), i, j, l
    cdef long long s, p
    cdef long long *a = <long long *> malloc(max(1, m * k) * sizeof(long long))
    cdef long long *b = <long long *> malloc(max(1, k * n) * sizeof(long long))
    if a == NULL or b == NULL:
        free(a)
        free(b)
        raise MemoryError()
    try:
        for i in range(m):
            for l in range(k):
                a[i * k + l] = A[i][l]
        for l in range(k):
            for j in range(n):
                b[l * n + j] = B[l][j]
        out = []
        for i in range(m):
            row = []
            for j in range(n):
                s = 0
                for l in range(k):
                    if mul_ovf(a[i * k + l], b[l * n + j], &p) or add_ovf(s, p, &s):
                        raise OverflowError("int64 overflow in matmul_int")
                row.append(s)
            out.append(row)
        return out
    finally:
        free(a)
        free(b)


def box_points(lo, hi, A, c):
    cdef Py_ssize_t d = len(lo), r = len(A), i, j
    cdef long long s, p
    if d == 0:
        return [()] if all(x <= 0 for x in c) else []
    cdef long long *x = <long long *> malloc(d * sizeof(long long))
    cdef long long *L = <long long *> malloc(d * sizeof(long long))
    cdef long long *H = <long long *> malloc(d * sizeof(long long))
    cdef long long *M = <long long *> malloc(max(1, r * d) * sizeof(long long))
    cdef long long *C = <long long *> malloc(max(1, r) * sizeof(long long))
    cdef bint ok
    out = []
    try:
        for i in range(d):
            L[i] = lo[i]
            H[i] = hi[i]
            x[i] = L[i]
            if L[i] > H[i]:
                return out
        for j in range(r):
            C[j] = c[j]
            for i in range(d):
                M[j * d + i] = A[j][i]
        while True:
            ok = True
            for j in range(r):
                s = 0
                for i in range(d):
                    if mul_ovf(M[j * d + i], x[i], &p) or add_ovf(s, p, &s):
                        raise OverflowError("int64 overflow in box_points")
                if s < C[j]:
                    ok = False
                    break
            if ok:
                out.append(tuple([x[i] for i in range(d)]))
            i = d - 1
            while i >= 0:
                if x[i] < H[i]:
                    x[i] += 1
                    break
                x[i] = L[i]
                i -= 1
            if i < 0:
                break
        return out
    finally:
        free(x)
        free(L)
        free(H)
        free(M)
        free(C)
