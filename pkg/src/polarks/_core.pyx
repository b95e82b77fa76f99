# cython: language_level=3, boundscheck=False, wraparound=False
# cython: cdivision=True, initializedcheck=False
"""Compiled kernels: GF(2) elimination on packed words, Gray-code coset
walk, and line-permutation expansion for orbit search.

Each kernel replays the exact operation order of its _gf2_py counterpart,
so certificates, minima and canonical keys are bit-identical between the
two backends.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def consistency_batch(
    unsigned long long[::1] ab,
    unsigned short[:, ::1] sets,
    int n_cols,
):
    """Per row subset: None when A.x = b is consistent, else the
    certificate integer over the subset's rows.

    ``ab`` packs one coefficient row per space line with the sign bit at
    position ``n_cols`` (so n_cols <= 63).
    """
    cdef Py_ssize_t n_sets = sets.shape[0]
    cdef Py_ssize_t length = sets.shape[1]
    cdef int yw = <int>((length + 63) >> 6)
    cdef int rw = 1 + yw
    cdef unsigned long long amask = ((<unsigned long long>1) << n_cols) - 1
    cdef unsigned long long bbit = (<unsigned long long>1) << n_cols
    cdef unsigned long long *work = <unsigned long long *>malloc(
        length * rw * sizeof(unsigned long long)
    )
    cdef int *slot_of_col = <int *>malloc(n_cols * sizeof(int))
    if work == NULL or slot_of_col == NULL:
        free(work)
        free(slot_of_col)
        raise MemoryError()
    cdef Py_ssize_t s, i, fail_row
    cdef int c, sl, w, found
    cdef unsigned long long a
    cdef unsigned long long *row
    cdef unsigned long long *piv
    out = []
    try:
        for s in range(n_sets):
            for c in range(n_cols):
                slot_of_col[c] = -1
            found = 0
            fail_row = -1
            for i in range(length):
                row = work + i * rw
                row[0] = ab[sets[s, i]]
                for w in range(1, rw):
                    row[w] = 0
                row[1 + (i >> 6)] |= (<unsigned long long>1) << (i & 63)
                while True:
                    a = row[0] & amask
                    if a == 0:
                        break
                    c = __builtin_ctzll(a)
                    sl = slot_of_col[c]
                    if sl < 0:
                        slot_of_col[c] = <int>i
                        break
                    piv = work + sl * rw
                    for w in range(rw):
                        row[w] ^= piv[w]
                if (row[0] & amask) == 0 and (row[0] & bbit):
                    found = 1
                    fail_row = i
                    break
            if found:
                y = 0
                row = work + fail_row * rw
                for w in range(yw - 1, -1, -1):
                    y = (y << 64) | row[1 + w]
                out.append(y)
            else:
                out.append(None)
    finally:
        free(work)
        free(slot_of_col)
    return out


def gray_min_weight(
    unsigned long long[:, ::1] basis,
    unsigned long long[::1] start,
):
    """Minimum weight over the coset start + span(basis), Gray-code order."""
    cdef Py_ssize_t r = basis.shape[0]
    cdef Py_ssize_t nw = basis.shape[1]
    if r > 62:
        raise OverflowError("basis too large for a 64-bit Gray counter")
    cdef unsigned long long *cur = <unsigned long long *>malloc(
        nw * sizeof(unsigned long long)
    )
    if cur == NULL:
        raise MemoryError()
    cdef Py_ssize_t k
    cdef int best = 0, w
    cdef unsigned long long t, total
    cdef int idx
    for k in range(nw):
        cur[k] = start[k]
        best += __builtin_popcountll(cur[k])
    total = (<unsigned long long>1) << r
    if best > 0 and r > 0:
        with nogil:
            t = 1
            while t < total:
                idx = __builtin_ctzll(t)
                w = 0
                for k in range(nw):
                    cur[k] ^= basis[idx, k]
                    w += __builtin_popcountll(cur[k])
                if w < best:
                    best = w
                    if best == 0:
                        break
                t += 1
    free(cur)
    return best


def expand_copy(
    unsigned short[:, ::1] perms,
    unsigned short[::1] lines,
):
    """Canonical byte keys of a line set's images under each permutation."""
    cdef Py_ssize_t n_perms = perms.shape[0]
    cdef Py_ssize_t length = lines.shape[0]
    if length > 512:
        raise OverflowError("line set too large for the fixed scratch")
    cdef unsigned short tmp[512]
    cdef Py_ssize_t p, k
    cdef Py_ssize_t m
    cdef unsigned short v
    out = []
    for p in range(n_perms):
        for k in range(length):
            tmp[k] = perms[p, lines[k]]
        for k in range(1, length):
            v = tmp[k]
            m = k - 1
            while m >= 0 and tmp[m] > v:
                tmp[m + 1] = tmp[m]
                m -= 1
            tmp[m + 1] = v
        out.append(PyBytes_FromStringAndSize(<char *>tmp, length * 2))
    return out
