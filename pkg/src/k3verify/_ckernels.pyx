# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels; mirror of ``_pykernels``."""
import numpy as np

cimport numpy as cnp


def fiber_counts(cnp.int64_t[:, :] coefs, int[:, :] add, int[:, :] mul,
                 cnp.int64_t[:] sqcount, int four, Py_ssize_t start=0, stop=None):
    cdef Py_ssize_t q = add.shape[0]
    cdef Py_ssize_t nrows = coefs.shape[0]
    cdef Py_ssize_t hi = nrows if stop is None else stop
    cdef Py_ssize_t i, x
    cdef int a1, a2, a3, a4, a6, x2, rhs, b
    cdef cnp.int64_t total
    out = np.zeros(nrows, dtype=np.int64)
    cdef cnp.int64_t[:] res = out
    with nogil:
        for i in range(start, hi):
            a1 = <int>coefs[i, 0]
            a2 = <int>coefs[i, 1]
            a3 = <int>coefs[i, 2]
            a4 = <int>coefs[i, 3]
            a6 = <int>coefs[i, 4]
            total = 0
            for x in range(q):
                x2 = mul[x, x]
                rhs = add[add[add[mul[x2, x], mul[a2, x2]], mul[a4, x]], a6]
                b = add[mul[a1, x], a3]
                total += sqcount[add[mul[b, b], mul[four, rhs]]]
            res[i] = total
    return out


def jacobi_histogram(int n, int[:, :] add, int[:] neg, cnp.int64_t[:] logmod,
                     int minus_one, Py_ssize_t start=1, stop=None):
    cdef Py_ssize_t q = add.shape[0]
    cdef Py_ssize_t hi = q if stop is None else stop
    cdef Py_ssize_t v1, v2
    cdef int base, v3
    cdef cnp.int64_t l1
    hist = np.zeros((n, n, n), dtype=np.int64)
    cdef cnp.int64_t[:, :, :] h = hist
    if start < 1:
        start = 1
    with nogil:
        for v1 in range(start, hi):
            base = add[minus_one, neg[v1]]
            l1 = logmod[v1]
            for v2 in range(1, q):
                v3 = add[base, neg[v2]]
                if v3 != 0:
                    h[l1, logmod[v2], logmod[v3]] += 1
    return hist


def fermat_projective_count(int[:, :] add, int[:] pown, Py_ssize_t start=0, stop=None):
    cdef Py_ssize_t q = add.shape[0]
    cdef Py_ssize_t hi = 4 * q if stop is None else stop
    cdef Py_ssize_t job, lead, a, b, c, free
    cdef int s0, s1
    cdef long long count = 0
    with nogil:
        for job in range(start, hi):
            lead = job // q
            a = job % q
            free = 3 - lead
            if free == 0:
                if a == 0 and pown[1] == 0:
                    count += 1
                continue
            s0 = add[pown[1], pown[a]]
            if free == 1:
                if s0 == 0:
                    count += 1
            elif free == 2:
                for b in range(q):
                    if add[s0, pown[b]] == 0:
                        count += 1
            else:
                for b in range(q):
                    s1 = add[s0, pown[b]]
                    for c in range(q):
                        if add[s1, pown[c]] == 0:
                            count += 1
    return count
