# cython: language_level=3
"""Compiled twins of the kernels in `fallback.py`.

The tree kernel draws randomness via SplitMix64 in exactly the same order as
the fallback, so both produce bitwise-identical importance vectors for the
same seed.  Any change here must be mirrored there.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef double _INV53 = 1.0 / 9007199254740992.0  # 2^-53
cdef uint64_t _GOLDEN = <uint64_t>0x9E3779B97F4A7C15


cdef inline uint64_t _next_u64(uint64_t* state) nogil:
    state[0] = state[0] + _GOLDEN
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _next_double(uint64_t* state) nogil:
    return <double>(_next_u64(state) >> 11) * _INV53


cdef inline double _gini(double size, double ones) nogil:
    cdef double p1 = ones / size
    cdef double p0 = (size - ones) / size
    return 1.0 - p1 * p1 - p0 * p0


def tree_importance_raw(X, y, int n_trees, int n_candidates, seed):
    """Unnormalized impurity-decrease importance; see fallback for semantics."""
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef int64_t[::1] yv = np.ascontiguousarray(y, dtype=np.int64)
    cdef Py_ssize_t n = Xv.shape[0]
    cdef Py_ssize_t f = Xv.shape[1]
    imp = np.zeros(f, dtype=np.float64)
    cdef double[::1] imp_v = imp

    cdef int64_t[::1] idx = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] lbuf = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] rbuf = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] pool = np.empty(f, dtype=np.int64)
    cdef int64_t[::1] stack_s = np.empty(n + 2, dtype=np.int64)
    cdef int64_t[::1] stack_e = np.empty(n + 2, dtype=np.int64)
    cdef int64_t[::1] stack_o = np.empty(n + 2, dtype=np.int64)

    cdef uint64_t base = <uint64_t>(int(seed) & ((1 << 64) - 1))
    cdef uint64_t state
    cdef int t
    with nogil:
        for t in range(n_trees):
            state = base + <uint64_t>t * _GOLDEN
            _grow_tree(Xv, yv, idx, lbuf, rbuf, pool,
                       stack_s, stack_e, stack_o,
                       n_candidates, &state, imp_v)
    return imp


cdef void _grow_tree(double[:, ::1] X, int64_t[::1] y, int64_t[::1] idx,
                     int64_t[::1] lbuf, int64_t[::1] rbuf, int64_t[::1] pool,
                     int64_t[::1] stack_s, int64_t[::1] stack_e,
                     int64_t[::1] stack_o,
                     int n_candidates, uint64_t* state,
                     double[::1] imp) nogil:
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t f = X.shape[1]
    cdef Py_ssize_t p, i, j, feat, s_i
    cdef Py_ssize_t start, end, size, top
    cdef int64_t ones, nl, ol, nr, o_r, tmp
    cdef int64_t best_feat, best_nl, best_ol
    cdef int evaluated
    cdef double lo, hi, v, thr, dec, g_node, best_dec, best_thr
    cdef Py_ssize_t a, b

    for p in range(n):
        idx[p] = p
    ones = 0
    for p in range(n):
        ones += y[p]
    stack_s[0] = 0
    stack_e[0] = n
    stack_o[0] = ones
    top = 1
    while top > 0:
        top -= 1
        start = stack_s[top]
        end = stack_e[top]
        ones = stack_o[top]
        size = end - start
        if size < 2 or ones == 0 or ones == size:
            continue
        g_node = _gini(<double>size, <double>ones)

        for p in range(f):
            pool[p] = p
        i = 0
        evaluated = 0
        best_dec = -1.0
        best_feat = -1
        best_thr = 0.0
        best_nl = 0
        best_ol = 0
        while i < f and evaluated < n_candidates:
            j = i + <Py_ssize_t>(_next_u64(state) % <uint64_t>(f - i))
            tmp = pool[i]
            pool[i] = pool[j]
            pool[j] = tmp
            feat = <Py_ssize_t>pool[i]
            i += 1
            lo = X[idx[start], feat]
            hi = lo
            for p in range(start + 1, end):
                v = X[idx[p], feat]
                if v < lo:
                    lo = v
                elif v > hi:
                    hi = v
            if lo == hi:
                continue  # constant in this node: not a candidate
            evaluated += 1
            thr = lo + _next_double(state) * (hi - lo)
            if thr >= hi:  # rounding guard: both sides must stay non-empty
                thr = lo
            nl = 0
            ol = 0
            for p in range(start, end):
                if X[idx[p], feat] <= thr:
                    nl += 1
                    ol += y[idx[p]]
            nr = size - nl
            o_r = ones - ol
            dec = (<double>size * g_node
                   - <double>nl * _gini(<double>nl, <double>ol)
                   - <double>nr * _gini(<double>nr, <double>o_r))
            if dec > best_dec:
                best_dec = dec
                best_feat = feat
                best_thr = thr
                best_nl = nl
                best_ol = ol
        if best_feat < 0:
            continue  # every feature constant in this node
        imp[best_feat] += best_dec / <double>n
        a = 0
        b = 0
        for p in range(start, end):
            s_i = <Py_ssize_t>idx[p]
            if X[s_i, best_feat] <= best_thr:
                lbuf[a] = s_i
                a += 1
            else:
                rbuf[b] = s_i
                b += 1
        for p in range(a):
            idx[start + p] = lbuf[p]
        for p in range(b):
            idx[start + a + p] = rbuf[p]
        stack_s[top] = start + best_nl
        stack_e[top] = end
        stack_o[top] = ones - best_ol
        top += 1
        stack_s[top] = start
        stack_e[top] = start + best_nl
        stack_o[top] = best_ol
        top += 1


def svm_dual_cd(X, y, double C, double tol, int max_passes):
    """Dual coordinate descent for the L1-hinge linear SVM; see fallback."""
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0]
    cdef Py_ssize_t d = Xv.shape[1]
    w_arr = np.zeros(d, dtype=np.float64)
    cdef double[::1] w = w_arr
    cdef double[::1] alpha = np.zeros(n, dtype=np.float64)
    cdef double[::1] qii = np.zeros(n, dtype=np.float64)
    cdef Py_ssize_t i, k
    cdef double g, pg, a, a_new, delta, q
    cdef double wsq, hinge, m, primal, dual, gap, alpha_sum, scale
    cdef int passes = 0
    cdef bint converged = False

    with nogil:
        for i in range(n):
            q = 0.0
            for k in range(d):
                q += Xv[i, k] * Xv[i, k]
            qii[i] = q
        gap = 0.0
        while passes < max_passes:
            for i in range(n):
                q = qii[i]
                if q <= 0.0:
                    continue
                g = 0.0
                for k in range(d):
                    g += w[k] * Xv[i, k]
                g = yv[i] * g - 1.0
                a = alpha[i]
                if a == 0.0:
                    pg = g if g < 0.0 else 0.0
                elif a == C:
                    pg = g if g > 0.0 else 0.0
                else:
                    pg = g
                if pg != 0.0:
                    a_new = a - g / q
                    if a_new < 0.0:
                        a_new = 0.0
                    elif a_new > C:
                        a_new = C
                    delta = a_new - a
                    if delta != 0.0:
                        alpha[i] = a_new
                        scale = delta * yv[i]
                        for k in range(d):
                            w[k] += scale * Xv[i, k]
            passes += 1
            wsq = 0.0
            for k in range(d):
                wsq += w[k] * w[k]
            hinge = 0.0
            for i in range(n):
                m = 0.0
                for k in range(d):
                    m += w[k] * Xv[i, k]
                m = 1.0 - yv[i] * m
                if m > 0.0:
                    hinge += m
            alpha_sum = 0.0
            for i in range(n):
                alpha_sum += alpha[i]
            primal = 0.5 * wsq + C * hinge
            dual = alpha_sum - 0.5 * wsq
            gap = primal - dual
            if gap <= tol * max(1.0, fabs(primal)):
                converged = True
                break
    return w_arr, passes, gap, converged
