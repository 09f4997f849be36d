"""Pure-numpy implementations of the two hot kernels.

Kept signature-compatible with the compiled extension (``sssinv._ckernels``)
so the backend can be swapped at import time.
"""

import numpy as np

FLAG_EXPANDED = 1
FLAG_DEGRADED = 2
FLAG_FALLBACK = 4

# margin keeping the min_points-th observation at a usable weight
BW_MARGIN = 1.05
_RANK_EPS = 1e-12


def _bandwidth(dists_sorted, base_bw, max_bw, min_points):
    """Smallest bandwidth >= base_bw holding min_points observations, capped."""
    if len(dists_sorted) >= min_points:
        bw = max(base_bw, BW_MARGIN * dists_sorted[min_points - 1])
    else:
        bw = max_bw
    return min(bw, max_bw)


def loclin_grid(angles, tbs, grid, base_bw, max_bw, min_points, kernel_id, order):
    """Kernel-weighted local fit of tbs(angles) evaluated at each grid angle.

    kernel_id: 0 = Epanechnikov, 1 = Gaussian truncated at the window edge
    (sigma = bandwidth / 3).  order: 1 = local linear, 0 = weighted mean.
    Returns (estimates, flags) with flag bits FLAG_EXPANDED / FLAG_DEGRADED /
    FLAG_FALLBACK per grid angle.
    """
    angles = np.asarray(angles, dtype=np.float64)
    tbs = np.asarray(tbs, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    est = np.empty(grid.size, dtype=np.float64)
    flags = np.zeros(grid.size, dtype=np.uint8)
    for k, target in enumerate(grid):
        d = np.abs(angles - target)
        bw = _bandwidth(np.sort(d), base_bw, max_bw, min_points)
        if bw > base_bw:
            flags[k] |= FLAG_EXPANDED
        inside = d < bw
        if inside.sum() < min_points:
            flags[k] |= FLAG_DEGRADED
        if not inside.any():
            est[k] = tbs[np.argmin(d)]
            flags[k] |= FLAG_FALLBACK
            continue
        u = angles[inside] - target
        if kernel_id == 1:
            w = np.exp(-4.5 * (u / bw) ** 2)
        else:
            w = 1.0 - (u / bw) ** 2
        y = tbs[inside]
        s0 = w.sum()
        if order == 0:
            est[k] = (w * y).sum() / s0
            continue
        s1 = (w * u).sum()
        s2 = (w * u * u).sum()
        t0 = (w * y).sum()
        t1 = (w * u * y).sum()
        den = s0 * s2 - s1 * s1
        if den <= _RANK_EPS * max(s0 * s2, 1e-300):
            est[k] = t0 / s0
            flags[k] |= FLAG_FALLBACK
        else:
            est[k] = (s2 * t0 - s1 * t1) / den
    return est, flags


def sgd_epoch(x, y, w, order, batch_size, lr, momentum,
              w1, b1, w2, b2, vw1, vb1, vw2, vb2):
    """One epoch of mini-batch momentum SGD on a 1-hidden-layer tanh net.

    Parameters and velocity buffers are updated in place; ``b2`` and ``vb2``
    are length-1 arrays so the scalar output bias can be mutated.  Returns the
    weight-averaged squared error observed while iterating.
    """
    n = x.shape[0]
    total_err = 0.0
    total_w = 0.0
    for start in range(0, n, batch_size):
        idx = order[start:start + batch_size]
        xb = x[idx]
        yb = y[idx]
        wb = w[idx]
        wsum = wb.sum()
        z = xb @ w1.T + b1
        hh = np.tanh(z)
        yhat = hh @ w2 + b2[0]
        e = yhat - yb
        total_err += float((wb * e * e).sum())
        total_w += float(wsum)
        g = (2.0 / wsum) * wb * e
        gb2 = g.sum()
        gw2 = g @ hh
        gz = np.outer(g, w2) * (1.0 - hh * hh)
        gw1 = gz.T @ xb
        gb1 = gz.sum(axis=0)
        vw1 *= momentum
        vw1 -= lr * gw1
        w1 += vw1
        vb1 *= momentum
        vb1 -= lr * gb1
        b1 += vb1
        vw2 *= momentum
        vw2 -= lr * gw2
        w2 += vw2
        vb2[0] = momentum * vb2[0] - lr * gb2
        b2[0] += vb2[0]
    return total_err / total_w
