"""Pure-NumPy implementations of the hot numeric kernels.

These are the fallback path used when numba is unavailable or disabled via
``VIRALAB_NUMBA=0``.  Every function here has a jit-compiled twin in
``_kernels_nb`` with identical semantics.
"""

import numpy as np


def influence_scores(r, f, w, d, a):
    """Engagement-ratio influence score, elementwise over count arrays.

    With g = r + f and h = w - d the score is (g*d*(a*r+f)) / (w*r*(a*d+h)).
    Degenerate inputs (r = 0, w = 0, or a*d + h <= 0) map to 0.0.
    """
    r = np.asarray(r, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    g = r + f
    h = w - d
    den_factor = a * d + h
    ok = (r > 0) & (w > 0) & (den_factor > 0)
    num = g * d * (a * r + f)
    den = np.where(ok, w * r * den_factor, 1.0)
    return np.where(ok, num / den, 0.0)


def log_ratio_scores(r, w, sentinel, sub=1.0):
    """ln(r / max(w, sub)) with zero-retweet entries pinned to `sentinel`."""
    r = np.asarray(r, dtype=np.float64)
    w = np.maximum(np.asarray(w, dtype=np.float64), sub)
    out = np.full(r.shape, sentinel, dtype=np.float64)
    pos = r > 0
    out[pos] = np.log(r[pos] / w[pos])
    return out


def follower_ratio_scores(r, w, sub=1.0):
    """r / max(w, sub) elementwise."""
    r = np.asarray(r, dtype=np.float64)
    w = np.maximum(np.asarray(w, dtype=np.float64), sub)
    return r / w


def percentile_ranks(rt, author_idx, tl_offsets, tl_values):
    """Strict percentile rank of each tweet within its author's timeline.

    `tl_values[tl_offsets[a]:tl_offsets[a+1]]` is author a's ascending
    retweet-count list; the rank is (# values < rt) / len, in [0, 1].
    """
    rt = np.asarray(rt, dtype=np.float64)
    out = np.empty(rt.shape[0], dtype=np.float64)
    order = np.argsort(author_idx, kind="stable")
    grouped = author_idx[order]
    starts = np.flatnonzero(np.r_[True, grouped[1:] != grouped[:-1]])
    ends = np.r_[starts[1:], grouped.shape[0]]
    for s, e in zip(starts, ends):
        a = grouped[s]
        tl = tl_values[tl_offsets[a]:tl_offsets[a + 1]]
        idx = order[s:e]
        out[idx] = np.searchsorted(tl, rt[idx], side="left") / tl.shape[0]
    return out


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logreg_fit(x, y, epochs, lr, l2):
    """Full-batch gradient descent on L2-regularized logistic loss.

    Weights and bias start at zero; returns (weights, bias, per-epoch loss).
    The loss is mean cross-entropy plus 0.5*l2*||w||^2 (bias unpenalized),
    recorded before each update step.
    """
    n, dim = x.shape
    w = np.zeros(dim, dtype=np.float64)
    b = 0.0
    losses = np.empty(epochs, dtype=np.float64)
    # divergence shows up as non-finite loss, which the caller reports;
    # suppress the intermediate overflow warnings here
    with np.errstate(over="ignore", invalid="ignore"):
        for ep in range(epochs):
            z = x @ w + b
            ce = np.maximum(z, 0.0) - y * z + np.log1p(np.exp(-np.abs(z)))
            losses[ep] = ce.mean() + 0.5 * l2 * (w @ w)
            resid = _sigmoid(z) - y
            w = w - lr * (x.T @ resid / n + l2 * w)
            b = b - lr * resid.mean()
    return w, b, losses
