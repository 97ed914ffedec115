# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Wolfe min-norm-point kernel (same cycles as ``_wolfe_py``).

Internal arithmetic is ``long double``, as in the Python kernel.
"""

import numpy as np

from libc.math cimport sqrtl, INFINITY, isfinite

cdef enum:
    CONVERGED = 0
    NO_PROGRESS = 1
    ITER_CAP = 2


# Householder norms below this (unit-scaled data) mean affine dependence.
cdef long double RANK_TOL = 1e-13


cdef int _affine_weights(const long double[:, ::1] Q, const int[::1] S, int k,
                         long double[:, ::1] Rt, long double[::1] rhs, long double[::1] diag,
                         long double[::1] u) noexcept nogil:
    # Householder QR of D = [q_i - q_last]; row a of Rt holds column a of D.
    cdef Py_ssize_t n = Q.shape[1]
    cdef Py_ssize_t p = k - 1
    cdef Py_ssize_t a, b, c, last
    cdef long double s, nrm, alpha, vnorm2

    if k == 1:
        u[0] = 1.0
        return 0
    if p > n:
        return -1
    last = S[p]
    for c in range(n):
        rhs[c] = -Q[last, c]
    for a in range(p):
        for c in range(n):
            Rt[a, c] = Q[S[a], c] - Q[last, c]
    for a in range(p):
        nrm = 0.0
        for c in range(a, n):
            nrm += Rt[a, c] * Rt[a, c]
        nrm = sqrtl(nrm)
        if nrm <= RANK_TOL:
            return -1
        alpha = -nrm if Rt[a, a] >= 0.0 else nrm
        Rt[a, a] -= alpha
        vnorm2 = 0.0
        for c in range(a, n):
            vnorm2 += Rt[a, c] * Rt[a, c]
        diag[a] = alpha
        if vnorm2 == 0.0:
            continue
        for b in range(a + 1, p):
            s = 0.0
            for c in range(a, n):
                s += Rt[a, c] * Rt[b, c]
            s = 2.0 * s / vnorm2
            for c in range(a, n):
                Rt[b, c] -= s * Rt[a, c]
        s = 0.0
        for c in range(a, n):
            s += Rt[a, c] * rhs[c]
        s = 2.0 * s / vnorm2
        for c in range(a, n):
            rhs[c] -= s * Rt[a, c]
    # R[a, b] = Rt[b, a] for b > a.
    s = 1.0
    for a in range(p - 1, -1, -1):
        nrm = rhs[a]
        for b in range(a + 1, p):
            nrm -= Rt[b, a] * u[b]
        u[a] = nrm / diag[a]
        if not isfinite(u[a]):
            return -1
        s -= u[a]
    u[p] = s
    return 0


def wolfe_weights(P, double tol, int max_iter):
    """Return ``(weights, status, residual)`` for the min-norm point of conv(rows of P)."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    cdef Py_ssize_t m = P.shape[0]
    cdef Py_ssize_t n = P.shape[1]
    sq_arr = np.einsum("ij,ij->i", P, P)
    cdef double scale2 = float(sq_arr.max())
    weights = np.zeros(m)
    if scale2 == 0.0:
        weights[0] = 1.0
        return weights, CONVERGED, 0.0

    Q_arr = P.astype(np.longdouble) / np.sqrt(np.longdouble(scale2))
    cdef const long double[:, ::1] Q = Q_arr
    cdef double[::1] wv = weights
    cdef int[::1] S = np.zeros(m + 1, dtype=np.intc)
    cdef int[::1] S_saved = np.zeros(m + 1, dtype=np.intc)
    cdef long double[::1] w = np.zeros(m + 1, dtype=np.longdouble)
    cdef long double[::1] w_saved = np.zeros(m + 1, dtype=np.longdouble)
    cdef long double[::1] v = np.zeros(m + 1, dtype=np.longdouble)
    cdef long double[::1] x = np.zeros(n, dtype=np.longdouble)
    cdef long double[:, ::1] Rt = np.zeros((m + 1, n), dtype=np.longdouble)
    cdef long double[::1] rhs = np.zeros(n, dtype=np.longdouble)
    cdef long double[::1] diag = np.zeros(m + 1, dtype=np.longdouble)

    cdef double tol_s = tol / scale2
    cdef long double xx, d, dmin, prev = INFINITY, resid = INFINITY
    cdef long double theta, ratio, denom, total
    cdef int k, k_saved, status = ITER_CAP, it, failed
    cdef Py_ssize_t a, c, j, jmin, r
    cdef bint in_S, all_pos

    with nogil:
        jmin = 0
        dmin = INFINITY
        for j in range(m):
            d = 0.0
            for c in range(n):
                d += Q[j, c] * Q[j, c]
            if d < dmin:
                dmin = d
                jmin = j
        k = 1
        S[0] = <int>jmin
        w[0] = 1.0
        for c in range(n):
            x[c] = Q[jmin, c]

        for it in range(max_iter):
            xx = 0.0
            for c in range(n):
                xx += x[c] * x[c]
            dmin = INFINITY
            jmin = 0
            for j in range(m):
                d = 0.0
                for c in range(n):
                    d += Q[j, c] * x[c]
                if d < dmin:
                    dmin = d
                    jmin = j
            resid = xx - dmin
            if resid <= tol_s:
                status = CONVERGED
                break
            in_S = False
            for a in range(k):
                if S[a] == jmin:
                    in_S = True
            # Near the optimum the gain can sit below rounding; allow a few ulps.
            if xx > prev * (1.0 + 1e-13) or in_S:
                status = NO_PROGRESS
                break
            prev = xx
            k_saved = k
            for a in range(k):
                S_saved[a] = S[a]
                w_saved[a] = w[a]
            S[k] = <int>jmin
            w[k] = 0.0
            k += 1
            failed = 0
            while True:
                if _affine_weights(Q, S, k, Rt, rhs, diag, v) != 0:
                    failed = 1
                    break
                all_pos = True
                for a in range(k):
                    if v[a] <= 0.0:
                        all_pos = False
                if all_pos:
                    for a in range(k):
                        w[a] = v[a]
                    break
                theta = INFINITY
                r = 0
                for a in range(k):
                    if v[a] <= 0.0:
                        denom = w[a] - v[a]
                        ratio = w[a] / denom if denom > 0.0 else 0.0
                        if ratio < theta:
                            theta = ratio
                            r = a
                for a in range(k):
                    w[a] = w[a] + theta * (v[a] - w[a])
                w[r] = 0.0
                c = 0
                total = 0.0
                for a in range(k):
                    if w[a] > 0.0:
                        S[c] = S[a]
                        w[c] = w[a]
                        total += w[a]
                        c += 1
                k = <int>c
                for a in range(k):
                    w[a] /= total
            if failed:
                k = k_saved
                for a in range(k):
                    S[a] = S_saved[a]
                    w[a] = w_saved[a]
                status = NO_PROGRESS
                break
            for c in range(n):
                x[c] = 0.0
            for a in range(k):
                for c in range(n):
                    x[c] += w[a] * Q[S[a], c]

        for a in range(k):
            wv[S[a]] = <double>w[a]

    return weights, status, <double>resid * scale2
