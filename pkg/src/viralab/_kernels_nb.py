"""Numba-compiled twins of the kernels in ``_kernels_np``.

Import of this module requires numba; the dispatcher in ``_kernels`` falls
back to the NumPy path when the import fails or is disabled by env flag.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _influence_scores_f64(r, f, w, d, a):
    n = r.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        ri, fi, wi, di = r[i], f[i], w[i], d[i]
        den_factor = a * di + (wi - di)
        if ri > 0.0 and wi > 0.0 and den_factor > 0.0:
            g = ri + fi
            out[i] = (g * di * (a * ri + fi)) / (wi * ri * den_factor)
        else:
            out[i] = 0.0
    return out


def influence_scores(r, f, w, d, a):
    return _influence_scores_f64(
        np.asarray(r, dtype=np.float64),
        np.asarray(f, dtype=np.float64),
        np.asarray(w, dtype=np.float64),
        np.asarray(d, dtype=np.float64),
        float(a),
    )


@njit(cache=True)
def _log_ratio_f64(r, w, sentinel, sub):
    n = r.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        if r[i] > 0.0:
            wi = w[i] if w[i] > sub else sub
            out[i] = math.log(r[i] / wi)
        else:
            out[i] = sentinel
    return out


def log_ratio_scores(r, w, sentinel, sub=1.0):
    return _log_ratio_f64(
        np.asarray(r, dtype=np.float64),
        np.asarray(w, dtype=np.float64),
        float(sentinel),
        float(sub),
    )


@njit(cache=True)
def _follower_ratio_f64(r, w, sub):
    n = r.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        wi = w[i] if w[i] > sub else sub
        out[i] = r[i] / wi
    return out


def follower_ratio_scores(r, w, sub=1.0):
    return _follower_ratio_f64(
        np.asarray(r, dtype=np.float64), np.asarray(w, dtype=np.float64), float(sub)
    )


@njit(cache=True)
def _percentile_ranks_f64(rt, author_idx, tl_offsets, tl_values):
    n = rt.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        a = author_idx[i]
        lo = tl_offsets[a]
        hi = tl_offsets[a + 1]
        size = hi - lo
        x = rt[i]
        # count of timeline values strictly below x
        left, right = lo, hi
        while left < right:
            mid = (left + right) // 2
            if tl_values[mid] < x:
                left = mid + 1
            else:
                right = mid
        out[i] = (left - lo) / size
    return out


def percentile_ranks(rt, author_idx, tl_offsets, tl_values):
    return _percentile_ranks_f64(
        np.asarray(rt, dtype=np.float64),
        np.asarray(author_idx, dtype=np.int64),
        np.asarray(tl_offsets, dtype=np.int64),
        np.asarray(tl_values, dtype=np.float64),
    )


@njit(cache=True)
def _logreg_fit_f64(x, y, epochs, lr, l2):
    n, dim = x.shape
    w = np.zeros(dim, dtype=np.float64)
    b = 0.0
    losses = np.empty(epochs, dtype=np.float64)
    resid = np.empty(n, dtype=np.float64)
    for ep in range(epochs):
        loss = 0.0
        for i in range(n):
            z = b
            for j in range(dim):
                z += x[i, j] * w[j]
            zi = z if z > 0.0 else 0.0
            loss += zi - y[i] * z + math.log1p(math.exp(-abs(z)))
            if z >= 0.0:
                p = 1.0 / (1.0 + math.exp(-z))
            else:
                ez = math.exp(z)
                p = ez / (1.0 + ez)
            resid[i] = p - y[i]
        reg = 0.0
        for j in range(dim):
            reg += w[j] * w[j]
        losses[ep] = loss / n + 0.5 * l2 * reg
        db = 0.0
        for j in range(dim):
            gj = 0.0
            for i in range(n):
                gj += x[i, j] * resid[i]
            w[j] = w[j] - lr * (gj / n + l2 * w[j])
        for i in range(n):
            db += resid[i]
        b = b - lr * db / n
    return w, b, losses


def logreg_fit(x, y, epochs, lr, l2):
    return _logreg_fit_f64(
        np.ascontiguousarray(x, dtype=np.float64),
        np.asarray(y, dtype=np.float64),
        int(epochs),
        float(lr),
        float(l2),
    )
