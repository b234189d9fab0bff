# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: fractional ranking and the exact rank-sum subset-sum table.

Contracts match prereqmine._kernels._fallback exactly; see that module for
the reference semantics.
"""

import numpy as np

BACKEND = "native"


def average_ranks(values):
    """1-based fractional ranks; tied values share the average of their span."""
    a = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] v = a
    cdef Py_ssize_t n = v.shape[0]
    order_arr = np.argsort(a, kind="stable").astype(np.intp)
    cdef Py_ssize_t[::1] order = order_arr
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i = 0, j, k
    cdef double avg
    while i < n:
        j = i
        while j + 1 < n and v[order[j + 1]] == v[order[i]]:
            j += 1
        avg = 0.5 * <double>(i + j) + 1.0
        for k in range(i, j + 1):
            out[order[k]] = avg
        i = j + 1
    return out_arr


def ranksum_count_distribution(doubled_ranks, n1):
    """Distribution of the size-n1 subset sums of ``doubled_ranks``.

    Returns an int64 array c with c[s] = number of n1-element subsets whose
    elements sum to s, covering every one of the C(N, n1) group assignments.
    """
    d_arr = np.ascontiguousarray(doubled_ranks, dtype=np.int64)
    cdef long long[::1] d = d_arr
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t m = <Py_ssize_t>n1
    if m < 0 or m > n:
        raise ValueError("subset size out of range")
    cdef Py_ssize_t smax = 0
    cdef Py_ssize_t i
    for i in range(n):
        smax += <Py_ssize_t>d[i]
    dp_arr = np.zeros((m + 1, smax + 1), dtype=np.int64)
    cdef long long[:, ::1] dp = dp_arr
    dp[0, 0] = 1
    cdef Py_ssize_t k, s, di, upper = 0
    for i in range(n):
        di = <Py_ssize_t>d[i]
        upper += di
        for k in range(min(m, i + 1), 0, -1):
            for s in range(upper, di - 1, -1):
                if dp[k - 1, s - di] != 0:
                    dp[k, s] += dp[k - 1, s - di]
    return dp_arr[m]
