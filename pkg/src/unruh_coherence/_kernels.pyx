# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Contract mirrors ``_kernels_py``: grouped outer products, sparse pair
coalescing, and the sqrt-geometric series sum. The irregular inner loops run
as C loops; sorting stays with numpy.
"""

import math

import numpy as np

from libc.stdint cimport int64_t
from libc.math cimport sqrt, pow, INFINITY

# keep the convergence-check cadence identical to the python backend
CHUNK = 65536
cdef int64_t _CHUNK = 65536


def block_outer(codes, amps, group_ptr):
    """All pairwise products within contiguous groups of a coded state."""
    cdef int64_t[::1] c = np.ascontiguousarray(codes, dtype=np.int64)
    cdef double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef int64_t[::1] ptr = np.ascontiguousarray(group_ptr, dtype=np.int64)

    cdef Py_ssize_t ngroups = ptr.shape[0] - 1
    cdef Py_ssize_t g, b
    cdef Py_ssize_t total = 0
    for g in range(ngroups):
        b = ptr[g + 1] - ptr[g]
        total += b * b

    bra_arr = np.empty(total, dtype=np.int64)
    ket_arr = np.empty(total, dtype=np.int64)
    val_arr = np.empty(total, dtype=np.float64)
    cdef int64_t[::1] bra = bra_arr
    cdef int64_t[::1] ket = ket_arr
    cdef double[::1] val = val_arr

    cdef Py_ssize_t out = 0, i, j, lo, hi
    cdef double ai
    for g in range(ngroups):
        lo = ptr[g]
        hi = ptr[g + 1]
        for i in range(lo, hi):
            ai = a[i]
            for j in range(lo, hi):
                bra[out] = c[i]
                ket[out] = c[j]
                val[out] = ai * a[j]
                out += 1
    return bra_arr, ket_arr, val_arr


def coalesce_pairs(bra, ket, vals):
    """Sort (bra, ket) pairs lexicographically, sum duplicates, drop zeros."""
    cdef Py_ssize_t n = len(vals)
    if n == 0:
        return (np.asarray(bra, dtype=np.int64).copy(),
                np.asarray(ket, dtype=np.int64).copy(),
                np.asarray(vals, dtype=np.float64).copy())

    order = np.lexsort((ket, bra))
    cdef int64_t[::1] b = np.ascontiguousarray(np.asarray(bra, dtype=np.int64)[order])
    cdef int64_t[::1] k = np.ascontiguousarray(np.asarray(ket, dtype=np.int64)[order])
    cdef double[::1] v = np.ascontiguousarray(np.asarray(vals, dtype=np.float64)[order])

    out_b_arr = np.empty(n, dtype=np.int64)
    out_k_arr = np.empty(n, dtype=np.int64)
    out_v_arr = np.empty(n, dtype=np.float64)
    cdef int64_t[::1] ob = out_b_arr
    cdef int64_t[::1] ok = out_k_arr
    cdef double[::1] ov = out_v_arr

    cdef Py_ssize_t m = 0, i
    cdef int64_t cur_b = b[0], cur_k = k[0]
    cdef double acc = v[0]
    for i in range(1, n):
        if b[i] == cur_b and k[i] == cur_k:
            acc += v[i]
        else:
            if acc != 0.0:
                ob[m] = cur_b
                ok[m] = cur_k
                ov[m] = acc
                m += 1
            cur_b = b[i]
            cur_k = k[i]
            acc = v[i]
    if acc != 0.0:
        ob[m] = cur_b
        ok[m] = cur_k
        ov[m] = acc
        m += 1
    return out_b_arr[:m].copy(), out_k_arr[:m].copy(), out_v_arr[:m].copy()


def sqrt_geometric_series(double q, double rel_tol, long long max_terms):
    """Sum_{m=0}^{M} sqrt(m+1) q^m with the geometric-majorant stopping rule.

    Same contract as the python backend: convergence checked every CHUNK
    terms; returns (total, tail_bound, terms, converged). Kahan-compensated
    accumulation keeps the multi-billion-term sums (s ~ 10) accurate.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError(f"series ratio must lie in [0, 1), got {q}")

    cdef double total = 1.0  # m = 0 term
    cdef double comp = 0.0
    cdef long long terms = 1
    cdef double bound = _tail_bound(q, terms)
    if bound <= rel_tol * total:
        return total, bound, terms, True

    cdef double lead, qp, term, y, t
    cdef long long i, m, step
    while terms < max_terms:
        step = max_terms - terms
        if step > _CHUNK:
            step = _CHUNK
        lead = pow(q, <double> terms)
        if lead == 0.0:
            return total, 0.0, terms, True
        qp = lead
        m = terms
        for i in range(step):
            term = sqrt(<double> (m + 1)) * qp
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
            qp *= q
            m += 1
        terms += step
        bound = _tail_bound(q, terms)
        if bound <= rel_tol * total:
            return total, bound, terms, True
    return total, bound, terms, False


cdef double _tail_bound(double q, long long terms):
    """Geometric-majorant bound on the tail after ``terms`` summed terms."""
    cdef double m_next = <double> terms
    cdef double q_maj = q * sqrt((m_next + 1.0) / m_next)
    if q_maj >= 1.0:
        return INFINITY
    return sqrt(m_next + 1.0) * pow(q, m_next) / (1.0 - q_maj)
