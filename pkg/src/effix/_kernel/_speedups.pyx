# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact simplex kernel.

Same algorithm and pivot order as ``pure.py`` but on C int64 storage with
128-bit intermediates.  Any value that leaves the int64 range raises
OverflowError; the caller is expected to rerun the instance on the
pure-Python kernel, which has no size limit.  Inputs are never mutated;
final tableau, basis and objective are returned as fresh Python lists.
"""

from libc.stdlib cimport free, malloc

ctypedef long long i64

cdef extern from *:
    ctypedef long long i128 "__int128"

cdef i128 I64_MAX = <i128> 9223372036854775807
cdef i128 I64_MIN = (-I64_MAX) - 1


cdef inline i128 _abs128(i128 v) nogil:
    return -v if v < 0 else v


cdef inline i128 _gcd128(i128 a, i128 b) nogil:
    cdef i128 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef int _store_normalized(i128 *tmp, i64 *out, Py_ssize_t n) except -1:
    """Content-normalize tmp[0:n] and store into out; -1 on overflow."""
    cdef i128 g = 0
    cdef Py_ssize_t j
    for j in range(n):
        if tmp[j]:
            g = _gcd128(g, _abs128(tmp[j]))
            if g == 1:
                break
    if g > 1:
        for j in range(n):
            tmp[j] = tmp[j] / g
    for j in range(n):
        if tmp[j] > I64_MAX or tmp[j] < I64_MIN:
            raise OverflowError("tableau entry exceeds int64")
        out[j] = <i64> tmp[j]
    return 0


def simplex_min(tab, basis, cost, barred=()):
    """int64 mirror of ``pure.simplex_min``; returns fresh lists."""
    cdef Py_ssize_t nrows = len(tab)
    cdef Py_ssize_t ncols = len(tab[0])
    cdef Py_ssize_t r, i, j
    cdef i64 *T = NULL
    cdef i64 *B = NULL
    cdef i64 *OBJ = NULL
    cdef char *BLK = NULL
    cdef i128 *tmp = NULL
    cdef i64 scale, p, m, a
    cdef i128 lhs, rhs
    cdef Py_ssize_t q, best
    cdef i64 *prow
    cdef i64 *row

    T = <i64 *> malloc(nrows * ncols * sizeof(i64))
    B = <i64 *> malloc(nrows * sizeof(i64))
    OBJ = <i64 *> malloc(ncols * sizeof(i64))
    BLK = <char *> malloc(ncols * sizeof(char))
    tmp = <i128 *> malloc(ncols * sizeof(i128))
    if T == NULL or B == NULL or OBJ == NULL or BLK == NULL or tmp == NULL:
        free(T); free(B); free(OBJ); free(BLK); free(tmp)
        raise MemoryError()

    try:
        for r in range(nrows):
            row_obj = tab[r]
            for j in range(ncols):
                T[r * ncols + j] = row_obj[j]
            B[r] = basis[r]
        for j in range(ncols):
            BLK[j] = 0
        for j in barred:
            BLK[j] = 1
        for j in range(ncols - 1):
            OBJ[j] = -(<i64> cost[j])
        OBJ[ncols - 1] = 0
        scale = 1

        # reduce the objective over the starting basis
        for r in range(nrows):
            prow = T + r * ncols
            m = OBJ[B[r]]
            if m:
                p = prow[B[r]]
                for j in range(ncols):
                    tmp[j] = <i128> OBJ[j] * p - <i128> m * prow[j]
                scale = _obj_normalize(tmp, OBJ, ncols, <i128> scale * p)

        while True:
            q = -1
            for j in range(ncols - 1):
                if OBJ[j] > 0 and not BLK[j]:
                    q = j
                    break
            if q < 0:
                return ("optimal",) + _export(T, B, OBJ, nrows, ncols, scale)

            best = -1
            for r in range(nrows):
                a = T[r * ncols + q]
                if a > 0:
                    if best < 0:
                        best = r
                    else:
                        lhs = <i128> T[r * ncols + ncols - 1] * T[best * ncols + q]
                        rhs = <i128> T[best * ncols + ncols - 1] * a
                        if lhs < rhs or (lhs == rhs and B[r] < B[best]):
                            best = r
            if best < 0:
                return ("unbounded",) + _export(T, B, OBJ, nrows, ncols, scale)

            prow = T + best * ncols
            p = prow[q]
            for i in range(nrows):
                if i == best:
                    continue
                row = T + i * ncols
                m = row[q]
                if m:
                    for j in range(ncols):
                        tmp[j] = <i128> row[j] * p - <i128> m * prow[j]
                    _store_normalized(tmp, row, ncols)
            m = OBJ[q]
            if m:
                for j in range(ncols):
                    tmp[j] = <i128> OBJ[j] * p - <i128> m * prow[j]
                scale = _obj_normalize(tmp, OBJ, ncols, <i128> scale * p)
            for j in range(ncols):
                tmp[j] = prow[j]
            _store_normalized(tmp, prow, ncols)
            B[best] = q
    finally:
        free(T); free(B); free(OBJ); free(BLK); free(tmp)


cdef i64 _obj_normalize(i128 *tmp, i64 *OBJ, Py_ssize_t ncols, i128 scale) except? -1:
    cdef i128 g = scale
    cdef Py_ssize_t j
    for j in range(ncols):
        if tmp[j]:
            g = _gcd128(g, _abs128(tmp[j]))
            if g == 1:
                break
    if g > 1:
        for j in range(ncols):
            tmp[j] = tmp[j] / g
        scale = scale / g
    for j in range(ncols):
        if tmp[j] > I64_MAX or tmp[j] < I64_MIN:
            raise OverflowError("objective entry exceeds int64")
        OBJ[j] = <i64> tmp[j]
    if scale > I64_MAX:
        raise OverflowError("objective scale exceeds int64")
    return <i64> scale


cdef tuple _export(i64 *T, i64 *B, i64 *OBJ, Py_ssize_t nrows, Py_ssize_t ncols, i64 scale):
    out_tab = [[T[r * ncols + j] for j in range(ncols)] for r in range(nrows)]
    out_basis = [B[r] for r in range(nrows)]
    out_obj = [OBJ[j] for j in range(ncols)]
    return (out_tab, out_basis, out_obj, int(scale))
