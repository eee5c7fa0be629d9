# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer row-reduction kernel.

Same algorithm as ``_rowred_py`` (fraction-free Gauss-Jordan with per-row
gcd normalization, first-nonzero pivoting) on int64 entries.  All products
are taken in 128-bit arithmetic; if a normalized entry would not fit in
int64 the routine bails out and the caller reruns the pure backend, so the
two backends always agree bit for bit when this one succeeds.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    ctypedef long long i128 "__int128_t"

cdef long long I64_MAX = 9223372036854775807

cdef inline long long _gcd64(long long a, long long b) noexcept nogil:
    cdef long long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a

cdef inline i128 _gcd128(i128 a, i128 b) noexcept nogil:
    cdef i128 t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a

cdef inline int _normalize64(long long[:, ::1] m, Py_ssize_t i, Py_ssize_t ncols) noexcept nogil:
    cdef long long g = 0
    cdef long long x
    cdef Py_ssize_t k
    for k in range(ncols):
        x = m[i, k]
        if x:
            g = _gcd64(g, x)
            if g == 1:
                return 0
    if g > 1:
        for k in range(ncols):
            m[i, k] = m[i, k] // g
    return 0


cdef int _update_row(long long[:, ::1] m, Py_ssize_t j, Py_ssize_t r,
                     long long f1, long long f2, i128* buf,
                     Py_ssize_t kstart, Py_ssize_t ncols) noexcept nogil:
    # row_j := f1*row_j - f2*row_r, gcd-normalized; returns 1 on overflow
    cdef Py_ssize_t k
    cdef i128 t, g
    g = 0
    for k in range(kstart, ncols):
        t = (<i128> f1) * m[j, k] - (<i128> f2) * m[r, k]
        buf[k] = t
        if t and g != 1:
            g = _gcd128(g, t)
    if g == 0:
        for k in range(kstart, ncols):
            m[j, k] = 0
        return 0
    for k in range(kstart, ncols):
        t = buf[k] // g
        if t > <i128> I64_MAX or t < -(<i128> I64_MAX):
            return 1
        m[j, k] = <long long> t
    return 0


def row_reduce_i64(long long[:, ::1] m):
    """Gauss-Jordan on an int64 matrix, in place.

    Returns the pivot column list, or None if int64 overflowed.
    """
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, sel
    cdef long long p, b, g, f1, f2, tmp
    cdef int bail = 0
    pivots = []
    if nrows == 0 or ncols == 0:
        return pivots
    cdef i128* buf = <i128*> malloc(ncols * sizeof(i128))
    if buf == NULL:
        raise MemoryError()
    with nogil:
        for c in range(ncols):
            sel = -1
            for i in range(r, nrows):
                if m[i, c]:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != r:
                for k in range(ncols):
                    tmp = m[r, k]
                    m[r, k] = m[sel, k]
                    m[sel, k] = tmp
            _normalize64(m, r, ncols)
            if m[r, c] < 0:
                for k in range(ncols):
                    m[r, k] = -m[r, k]
            p = m[r, c]
            for j in range(nrows):
                if j == r:
                    continue
                b = m[j, c]
                if not b:
                    continue
                g = _gcd64(p, b)
                f1 = p // g
                f2 = b // g
                if _update_row(m, j, r, f1, f2, buf, 0, ncols):
                    bail = 1
                    break
            if bail:
                break
            with gil:
                pivots.append(c)
            r += 1
            if r == nrows:
                break
    free(buf)
    if bail:
        return None
    return pivots


def echelon_pivots_i64(long long[:, ::1] m):
    """Forward elimination pivots on an int64 matrix, or None on overflow."""
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, sel
    cdef long long p, b, g, f1, f2, tmp
    cdef int bail = 0
    pivots = []
    if nrows == 0 or ncols == 0:
        return pivots
    cdef i128* buf = <i128*> malloc(ncols * sizeof(i128))
    if buf == NULL:
        raise MemoryError()
    with nogil:
        for c in range(ncols):
            sel = -1
            for i in range(r, nrows):
                if m[i, c]:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != r:
                for k in range(ncols):
                    tmp = m[r, k]
                    m[r, k] = m[sel, k]
                    m[sel, k] = tmp
            _normalize64(m, r, ncols)
            if m[r, c] < 0:
                for k in range(ncols):
                    m[r, k] = -m[r, k]
            p = m[r, c]
            for j in range(r + 1, nrows):
                b = m[j, c]
                if not b:
                    continue
                g = _gcd64(p, b)
                f1 = p // g
                f2 = b // g
                if _update_row(m, j, r, f1, f2, buf, c, ncols):
                    bail = 1
                    break
            if bail:
                break
            with gil:
                pivots.append(c)
            r += 1
            if r == nrows:
                break
    free(buf)
    if bail:
        return None
    return pivots
