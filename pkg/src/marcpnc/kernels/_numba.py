"""Loop kernels compiled with numba; same contracts as ``_numpy``."""

import numpy as np
from numba import njit

NAME = "numba"

RELAY_CORRECT = 0
RELAY_ERROR = 1


@njit(cache=True, nogil=True)
def _abs2(z):
    return z.real * z.real + z.imag * z.imag


@njit(cache=True, nogil=True)
def relay_ml(y_r, g, pts, cand):
    n, k = g.shape
    nc = cand.shape[0]
    out = np.empty(n, dtype=np.int64)
    for t in range(n):
        best = np.inf
        arg = 0
        for c in range(nc):
            s = 0j
            for i in range(k):
                s += g[t, i] * pts[cand[c, i]]
            d = _abs2(y_r[t] - s)
            if d < best:
                best = d
                arg = c
        out[t] = arg
    return out


@njit(cache=True, nogil=True)
def dest_naive(y1, y2, g1, g2, gr, pts, cand, fflat):
    n, k = g1.shape
    nc = cand.shape[0]
    idx = np.empty(n, dtype=np.int64)
    met = np.empty(n)
    for t in range(n):
        best = np.inf
        arg = 0
        for c in range(nc):
            s1 = 0j
            s2 = 0j
            for i in range(k):
                p = pts[cand[c, i]]
                s1 += g1[t, i] * p
                s2 += g2[t, i] * p
            v = _abs2(y1[t] - s1) + _abs2(y2[t] - s2 - gr[t] * pts[fflat[c]])
            if v < best:
                best = v
                arg = c
        idx[t] = arg
        met[t] = best
    return idx, met, np.zeros(n, dtype=np.int8), n * nc


@njit(cache=True, nogil=True)
def dest_novel(y1, y2, g1, g2, gr, pts, cand, fflat, log_snr):
    n, k = g1.shape
    nc = cand.shape[0]
    m = pts.size
    idx = np.empty(n, dtype=np.int64)
    met = np.empty(n)
    br = np.empty(n, dtype=np.int8)
    evals = 0
    for t in range(n):
        best = np.inf
        arg = 0
        barg = 0
        for c in range(nc):
            s1 = 0j
            s2 = 0j
            for i in range(k):
                p = pts[cand[c, i]]
                s1 += g1[t, i] * p
                s2 += g2[t, i] * p
            t1 = _abs2(y1[t] - s1)
            u = y2[t] - s2
            fc = fflat[c]
            m1 = t1 + _abs2(u - gr[t] * pts[fc])
            r2 = np.inf
            evals += m
            for xr in range(m):
                if xr != fc:
                    d = _abs2(u - gr[t] * pts[xr])
                    if d < r2:
                        r2 = d
            alt = log_snr + t1 + r2
            if m1 <= alt:
                v = m1
                b = RELAY_CORRECT
            else:
                v = alt
                b = RELAY_ERROR
            if v < best:
                best = v
                arg = c
                barg = b
        idx[t] = arg
        met[t] = best
        br[t] = barg
    return idx, met, br, evals


@njit(cache=True, nogil=True)
def dest_fast(ry1, ry2, rs, pts, rest_cand, fflat, log_snr):
    n = ry1.size
    m = pts.size
    nfix, km1 = rest_cand.shape
    k = km1 + 1
    idx = np.empty(n, dtype=np.int64)
    met = np.empty(n)
    br = np.empty(n, dtype=np.int8)
    evals = 0
    for t in range(n):
        r11 = rs[t, 0, 0]
        rk = rs[t, 1, k]
        best = np.inf
        bidx = 0
        bbr = 0
        for f in range(nfix):
            e1 = ry1[t]
            e2 = ry2[t]
            for i in range(km1):
                p = pts[rest_cand[f, i]]
                e1 -= rs[t, 0, i + 1] * p
                e2 -= rs[t, 1, i + 1] * p
            # one pass over S serves x_1 (phi1, phi2) and x_R (phi3)
            a_val = np.inf
            a_arg = 0
            p1min = np.inf
            p1arg = 0
            p3min = np.inf
            evals += m
            for s in range(m):
                phi1 = _abs2(e1 - r11 * pts[s])
                phi2 = _abs2(e2 - rk * pts[fflat[s * nfix + f]])
                phi3 = _abs2(e2 - rk * pts[s])
                if phi1 + phi2 < a_val:
                    a_val = phi1 + phi2
                    a_arg = s
                if phi1 < p1min:
                    p1min = phi1
                    p1arg = s
                if phi3 < p3min:
                    p3min = phi3
            b_val = p1min + p3min + log_snr
            if a_val <= b_val:
                v = a_val
                c = a_arg * nfix + f
                b = RELAY_CORRECT
            else:
                v = b_val
                c = p1arg * nfix + f
                b = RELAY_ERROR
            if v < best or (v == best and c < bidx):
                best = v
                bidx = c
                bbr = b
        idx[t] = bidx
        met[t] = best
        br[t] = bbr
    return idx, met, br, evals
