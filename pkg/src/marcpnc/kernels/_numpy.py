"""Vectorised numpy kernels; reference path for the numba kernels.

Decoder kernels return ``(index, metric, branch, evals)`` where ``evals``
counts candidate-symbol loop iterations (scored hypotheses) over the
batch. Every kernel scores candidate label tuples in lexicographic order and
breaks exact ties towards the smallest tuple index (``np.argmin``).
"""

import numpy as np

NAME = "numpy"

RELAY_CORRECT = 0
RELAY_ERROR = 1


def relay_ml(y_r, g, pts, cand):
    """Joint ML tuple index per trial. ``g[t, i] = h_SR * a_i * sqrt(es)``."""
    s = g @ pts[cand].T
    return np.argmin(np.abs(y_r[:, None] - s) ** 2, axis=1)


def _first_terms(y1, y2, g1, g2, pts, cand):
    sym = pts[cand]
    t1 = np.abs(y1[:, None] - g1 @ sym.T) ** 2
    u = y2[:, None] - g2 @ sym.T
    return t1, u


def dest_naive(y1, y2, g1, g2, gr, pts, cand, fflat):
    t1, u = _first_terms(y1, y2, g1, g2, pts, cand)
    m1 = t1 + np.abs(u - gr[:, None] * pts[fflat]) ** 2
    idx = np.argmin(m1, axis=1)
    rows = np.arange(idx.size)
    return idx, m1[rows, idx], np.zeros(idx.size, dtype=np.int8), m1.size


def dest_novel(y1, y2, g1, g2, gr, pts, cand, fflat, log_snr):
    t1, u = _first_terms(y1, y2, g1, g2, pts, cand)
    res = np.abs(u[:, :, None] - gr[:, None, None] * pts) ** 2
    cols = np.arange(fflat.size)
    m1 = t1 + res[:, cols, fflat]
    res[:, cols, fflat] = np.inf
    m2 = t1 + res.min(axis=2)
    alt = log_snr + m2
    use_m1 = m1 <= alt
    val = np.where(use_m1, m1, alt)
    idx = np.argmin(val, axis=1)
    rows = np.arange(idx.size)
    branch = np.where(use_m1[rows, idx], RELAY_CORRECT, RELAY_ERROR).astype(np.int8)
    return idx, val[rows, idx], branch, res.size


def dest_fast(ry1, ry2, rs, pts, rest_cand, fflat, log_snr):
    """Fast decoder on rotated observations.

    ``rs`` is the ``(n, 2, K+1)`` triangularised channel already scaled by
    ``sqrt(es)`` with the H-R pivot source in column 0; ``rest_cand`` lists
    the ``M**(K-1)`` fixings of the other sources in lexicographic order and
    ``fflat`` is the relay map in the same (pivot-first) source order.
    """
    m = pts.size
    nfix = rest_cand.shape[0]
    k = rest_cand.shape[1] + 1
    sym = pts[rest_cand]
    p1 = rs[:, 0, 1:k] @ sym.T
    p2 = rs[:, 1, 1:k] @ sym.T
    e1 = ry1[:, None] - p1
    e2 = ry2[:, None] - p2
    phi1 = np.abs(e1[:, :, None] - rs[:, 0, 0, None, None] * pts) ** 2
    fx = fflat.reshape(m, nfix).T
    rk = rs[:, 1, k, None, None]
    phi2 = np.abs(e2[:, :, None] - rk * pts[fx]) ** 2
    phi3 = np.abs(e2[:, :, None] - rk * pts) ** 2
    s12 = phi1 + phi2
    x1a = np.argmin(s12, axis=2)
    x1b = np.argmin(phi1, axis=2)
    a_val = np.take_along_axis(s12, x1a[..., None], 2)[..., 0]
    b_val = (np.take_along_axis(phi1, x1b[..., None], 2)[..., 0]
             + phi3.min(axis=2) + log_snr)
    use_a = a_val <= b_val
    mval = np.where(use_a, a_val, b_val)
    x1 = np.where(use_a, x1a, x1b)
    cidx = x1 * nfix + np.arange(nfix)
    best = mval.min(axis=1)
    cidx_masked = np.where(mval == best[:, None], cidx, np.iinfo(np.int64).max)
    j = np.argmin(cidx_masked, axis=1)
    rows = np.arange(j.size)
    branch = np.where(use_a[rows, j], RELAY_CORRECT, RELAY_ERROR).astype(np.int8)
    return cidx[rows, j], best, branch, phi1.size
