"""Pure-Python Wolfe min-norm-point kernel.

Used when the compiled ``_wolfe`` extension is unavailable. The two kernels
follow the same sequence of major and minor cycles and both work in extended
precision (``long double``), so they agree up to summation order.
"""

import numpy as np

CONVERGED = 0
NO_PROGRESS = 1
ITER_CAP = 2

# Householder norms below this (data scaled to unit max norm) mean the
# corral is affinely dependent to working precision.
RANK_TOL = 1e-13

_LD = np.longdouble


def _affine_weights(B):
    # Minimiser of ||B^T v|| over sum(v) = 1. With v = e_k + Z a the problem is
    # the least-squares fit of -b_k by the differences b_i - b_k, solved by
    # Householder QR so the error grows with cond(D) rather than its square.
    k, n = B.shape
    if k == 1:
        return np.ones(1, dtype=_LD)
    p = k - 1
    if p > n:
        return None
    Rt = B[:-1] - B[-1]  # row a is column a of D
    rhs = -B[-1].copy()
    diag = np.empty(p, dtype=_LD)
    for a in range(p):
        col = Rt[a, a:]
        nrm = np.sqrt(col @ col)
        if nrm <= RANK_TOL:
            return None
        alpha = -nrm if col[0] >= 0 else nrm
        col[0] -= alpha
        diag[a] = alpha
        vnorm2 = col @ col
        if vnorm2 == 0:
            continue
        if a + 1 < p:
            rest = Rt[a + 1:, a:]
            rest -= np.outer((rest @ col) * (2 / vnorm2), col)
        rhs[a:] -= (2 * (col @ rhs[a:]) / vnorm2) * col
    u = np.empty(k, dtype=_LD)
    for a in range(p - 1, -1, -1):
        u[a] = (rhs[a] - Rt[a + 1:p, a] @ u[a + 1:p]) / diag[a]
    u[p] = 1 - u[:p].sum()
    if not np.all(np.isfinite(u)):
        return None
    return u


def wolfe_weights(P, tol, max_iter):
    """Return ``(weights, status, residual)`` for the min-norm point of conv(rows of P).

    ``residual`` is ``||x||^2 - min_j p_j^T x`` in the units of ``P``.
    """
    P = np.ascontiguousarray(P, dtype=np.float64)
    m = P.shape[0]
    sq = np.einsum("ij,ij->i", P, P)
    scale2 = float(sq.max())
    weights = np.zeros(m)
    if scale2 == 0.0:
        weights[0] = 1.0
        return weights, CONVERGED, 0.0

    Q = P.astype(_LD) / np.sqrt(_LD(scale2))
    tol_s = tol / scale2
    j = int(np.argmin(np.einsum("ij,ij->i", Q, Q)))
    S = [j]
    w = np.ones(1, dtype=_LD)
    x = Q[j].copy()
    prev = np.inf
    status = ITER_CAP
    resid = np.inf
    for _ in range(max_iter):
        xx = x @ x
        dots = Q @ x
        j = int(np.argmin(dots))
        resid = float(xx - dots[j])
        if resid <= tol_s:
            status = CONVERGED
            break
        # Near the optimum the gain can sit below rounding; allow a few ulps.
        if xx > prev * (1.0 + 1e-13) or j in S:
            status = NO_PROGRESS
            break
        prev = xx
        saved_S, saved_w = list(S), w.copy()
        S.append(j)
        w = np.append(w, _LD(0))
        while True:
            v = _affine_weights(Q[S])
            if v is None:
                break
            if np.all(v > 0):
                w = v
                break
            neg = np.flatnonzero(v <= 0)
            denom = w[neg] - v[neg]
            ratios = np.where(denom > 0, w[neg] / np.where(denom > 0, denom, 1), 0)
            r = int(np.argmin(ratios))
            theta = ratios[r]
            w = w + theta * (v - w)
            w[neg[r]] = 0
            keep = w > 0
            S = [s for s, k in zip(S, keep) if k]
            w = w[keep]
            w = w / w.sum()
        if v is None:
            S, w = saved_S, saved_w
            status = NO_PROGRESS
            break
        x = w @ Q[S]

    weights[S] = w
    return weights, status, resid * scale2
