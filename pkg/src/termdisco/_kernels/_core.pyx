# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dynamic-programming kernels.

Mirror of :mod:`termdisco._kernels.reference`, kept operation-for-operation
identical so both backends return bit-identical floats.  Any change here must
be replicated in the reference module (the test suite enforces equality).
"""

from libc.math cimport INFINITY

import numpy as np


def lev_weighted(x, y, wx, wy):
    """Weighted edit distance; see the reference implementation for rules."""
    cdef long[::1] xv = np.ascontiguousarray(x, dtype=np.int64)
    cdef long[::1] yv = np.ascontiguousarray(y, dtype=np.int64)
    cdef double[::1] wxv = np.ascontiguousarray(wx, dtype=np.float64)
    cdef double[::1] wyv = np.ascontiguousarray(wy, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t m = yv.shape[0]
    cdef double[::1] prev = np.zeros(m + 1, dtype=np.float64)
    cdef double[::1] cur = np.zeros(m + 1, dtype=np.float64)
    cdef double[::1] tmp
    cdef Py_ssize_t i, j
    cdef long xi
    cdef double wi, sub, dele, ins, best
    with nogil:
        for j in range(1, m + 1):
            prev[j] = prev[j - 1] + wyv[j - 1]
        for i in range(1, n + 1):
            cur[0] = prev[0] + wxv[i - 1]
            xi = xv[i - 1]
            wi = wxv[i - 1]
            for j in range(1, m + 1):
                sub = prev[j - 1]
                if xi != yv[j - 1]:
                    sub = sub + wi * wyv[j - 1]
                dele = prev[j] + wi
                ins = cur[j - 1] + wyv[j - 1]
                best = sub
                if dele < best:
                    best = dele
                if ins < best:
                    best = ins
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
    return prev[m]


def align_matrix(score):
    """Fill the local-alignment score matrix; see the reference module."""
    cdef double[:, ::1] s = np.ascontiguousarray(score, dtype=np.float64)
    cdef Py_ssize_t n = s.shape[0]
    cdef Py_ssize_t m = s.shape[1]
    out = np.zeros((n + 1, m + 1), dtype=np.float64)
    cdef double[:, ::1] p = out
    cdef Py_ssize_t i, j
    cdef double best
    with nogil:
        for i in range(1, n + 1):
            for j in range(1, m + 1):
                best = p[i - 1, j - 1] + s[i - 1, j - 1]
                if p[i - 1, j] > best:
                    best = p[i - 1, j]
                if p[i, j - 1] > best:
                    best = p[i, j - 1]
                if best < 0.0:
                    best = 0.0
                p[i, j] = best
    return out


def viterbi_chain(loglik, ln_stay, ln_step, ln_exit, is_entry, ln_prior):
    """Best chain-position path; see the reference module for semantics."""
    cdef double[:, ::1] ll = np.ascontiguousarray(loglik, dtype=np.float64)
    cdef double[::1] stay = np.ascontiguousarray(ln_stay, dtype=np.float64)
    cdef double[::1] step = np.ascontiguousarray(ln_step, dtype=np.float64)
    cdef double[::1] exit_ = np.ascontiguousarray(ln_exit, dtype=np.float64)
    cdef unsigned char[::1] entry = np.ascontiguousarray(is_entry, dtype=np.uint8)
    cdef double lp = ln_prior
    cdef Py_ssize_t T = ll.shape[0]
    cdef Py_ssize_t J = ll.shape[1]
    cdef double NINF = -INFINITY
    cdef double[::1] delta = np.empty(J, dtype=np.float64)
    cdef double[::1] nxt = np.empty(J, dtype=np.float64)
    cdef double[::1] swp
    bp_arr = np.zeros((T, J), dtype=np.int8)
    cdef signed char[:, ::1] bp = bp_arr
    src_arr = np.zeros(T, dtype=np.int64)
    cdef long[::1] src_exit = src_arr
    path_arr = np.empty(T, dtype=np.int32)
    cdef int[::1] path = path_arr
    cdef Py_ssize_t t, j, best_exit_j, best_j
    cdef double best_exit, v, best
    cdef signed char choice
    with nogil:
        for j in range(J):
            if entry[j]:
                delta[j] = lp + ll[0, j]
            else:
                delta[j] = NINF
        for t in range(1, T):
            best_exit = NINF
            best_exit_j = 0
            for j in range(J):
                if exit_[j] == NINF:
                    continue
                v = delta[j] + exit_[j]
                if v > best_exit:
                    best_exit = v
                    best_exit_j = j
            src_exit[t] = best_exit_j
            for j in range(J):
                best = delta[j] + stay[j]
                choice = 0
                if not entry[j]:
                    v = delta[j - 1] + step[j - 1]
                    if v > best:
                        best = v
                        choice = 1
                else:
                    v = best_exit + lp
                    if v > best:
                        best = v
                        choice = 2
                nxt[j] = best + ll[t, j]
                bp[t, j] = choice
            swp = delta
            delta = nxt
            nxt = swp
        best = NINF
        best_j = 0
        for j in range(J):
            if exit_[j] == NINF:
                continue
            if delta[j] > best:
                best = delta[j]
                best_j = j
        j = best_j
        path[T - 1] = <int> j
        for t in range(T - 1, 0, -1):
            choice = bp[t, j]
            if choice == 1:
                j = j - 1
            elif choice == 2:
                j = src_exit[t]
            path[t - 1] = <int> j
    return path_arr


def dtw_path(cost):
    """Min-cost monotone path; see the reference module for tie rules."""
    cdef double[:, ::1] c = np.ascontiguousarray(cost, dtype=np.float64)
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t m = c.shape[1]
    acc_arr = np.zeros((n, m), dtype=np.float64)
    ln_arr = np.zeros((n, m), dtype=np.int64)
    cdef double[:, ::1] acc = acc_arr
    cdef long[:, ::1] ln = ln_arr
    cdef Py_ssize_t i, j
    cdef double best
    cdef long steps
    with nogil:
        acc[0, 0] = c[0, 0]
        ln[0, 0] = 1
        for j in range(1, m):
            acc[0, j] = acc[0, j - 1] + c[0, j]
            ln[0, j] = j + 1
        for i in range(1, n):
            acc[i, 0] = acc[i - 1, 0] + c[i, 0]
            ln[i, 0] = i + 1
            for j in range(1, m):
                best = acc[i - 1, j - 1]
                steps = ln[i - 1, j - 1]
                if acc[i - 1, j] < best:
                    best = acc[i - 1, j]
                    steps = ln[i - 1, j]
                if acc[i, j - 1] < best:
                    best = acc[i, j - 1]
                    steps = ln[i, j - 1]
                acc[i, j] = best + c[i, j]
                ln[i, j] = steps + 1
    return acc[n - 1, m - 1], ln[n - 1, m - 1]
