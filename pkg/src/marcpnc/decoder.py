"""Destination decoders: naive minimum distance, the log(SNR)-corrected
decoder (exhaustive), and its fast QR-based implementation.

The single-instance functions take the observation, channel, scheme and
SNR ``es`` (linear); ``log(SNR)`` is ``np.log(es)`` with no clamping.
The ``*_batch`` functions run the same decoders over a leading trial axis
and return lexicographic tuple indices.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .codebook import hr_pivot
from .netcode import candidate_table

__all__ = ["Branch", "DestinationDecision", "QrFactorization",
           "PreconditionError", "build_heq", "qr_2xn", "qr_batch",
           "metric_m1", "metric_m2", "metric_m3", "metric_m4",
           "decode_naive", "decode_novel_exhaustive", "decode_novel_fast",
           "decode_batch", "DECODERS"]

DECODERS = ("naive", "novel_exhaustive", "novel_fast")
_DEGENERATE = 1e-14


class PreconditionError(ValueError):
    """The fast decoder needs some ``W_i`` H-R orthogonal with ``W_R``."""


class Branch(enum.IntEnum):
    RELAY_CORRECT = 0   # m1 arm
    RELAY_ERROR = 1     # log(SNR) + m2 arm


@dataclass(frozen=True)
class DestinationDecision:
    labels: tuple
    chosen_branch: Branch
    metric_value: float


@dataclass(frozen=True, eq=False)
class QrFactorization:
    q: np.ndarray
    r: np.ndarray
    y_tilde: np.ndarray


def build_heq(ch, c):
    """``2 x (K+1)`` matrix with columns ``[a_i h_SiD, b_i h_SiD]`` and
    ``[0, h_RD]`` (batched over leading axes of ``ch``)."""
    h_sd = np.asarray(ch.h_SD, dtype=np.complex128)
    h_rd = np.asarray(ch.h_RD, dtype=np.complex128)
    top = np.concatenate([h_sd * c.a, np.zeros_like(h_rd)[..., None]], axis=-1)
    bot = np.concatenate([h_sd * c.b, h_rd[..., None]], axis=-1)
    return np.stack([top, bot], axis=-2)


def qr_batch(heq, y):
    """Givens QR of ``(..., 2, N)`` matrices; returns ``q, r, q^H y``.

    A first column with norm below 1e-14 gets the identity rotation.
    """
    heq = np.asarray(heq, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    u, v = heq[..., 0, 0], heq[..., 1, 0]
    nrm = np.sqrt(np.abs(u) ** 2 + np.abs(v) ** 2)
    degenerate = nrm < _DEGENERATE
    safe = np.where(degenerate, 1.0, nrm)
    cu = np.where(degenerate, 1.0, u / safe)
    cv = np.where(degenerate, 0.0, v / safe)
    q = np.empty(heq.shape[:-2] + (2, 2), dtype=np.complex128)
    q[..., 0, 0] = cu
    q[..., 0, 1] = -np.conj(cv)
    q[..., 1, 0] = cv
    q[..., 1, 1] = np.conj(cu)
    qh = np.conj(np.swapaxes(q, -1, -2))
    r = qh @ heq
    r[..., 1, 0] = 0.0
    y_t = (qh @ y[..., None])[..., 0]
    return q, r, y_t


def qr_2xn(heq, y_D):
    q, r, y_t = qr_batch(heq, y_D)
    return QrFactorization(q, r, y_t)


# -- metrics (direct formulas, one tuple of labels at a time) --------------

def _terms(x, obs, ch, c, ss, es):
    sym = ss.points[np.asarray(x)]
    se = np.sqrt(es)
    first = abs(obs.y_D1 - np.sum(ch.h_SD * se * c.a * sym)) ** 2
    u = obs.y_D2 - np.sum(ch.h_SD * se * c.b * sym)
    return first, u, ch.h_RD * se


def _phase2(u, g_rd, ss, x_R):
    return abs(u - g_rd * ss.points[x_R]) ** 2


def metric_m1(x, obs, ch, c, f, es, ss):
    first, u, g = _terms(x, obs, ch, c, ss, es)
    return float(first + _phase2(u, g, ss, f(*x)))


def metric_m2(x, obs, ch, c, f, es, ss):
    first, u, g = _terms(x, obs, ch, c, ss, es)
    fx = f(*x)
    return float(first + min(_phase2(u, g, ss, r) for r in range(ss.order) if r != fx))


def metric_m3(x, obs, ch, c, es, ss):
    first, u, g = _terms(x, obs, ch, c, ss, es)
    return float(first + min(_phase2(u, g, ss, r) for r in range(ss.order)))


def metric_m4(x, x_R, obs, ch, c, es, ss):
    """Joint residual of ``(x, x_R)`` plus the ``log(SNR)`` correction."""
    first, u, g = _terms(x, obs, ch, c, ss, es)
    return float(first + _phase2(u, g, ss, x_R) + np.log(es))


# -- batch decoders ---------------------------------------------------------

def _batch_inputs(y1, y2, h_sd, h_rd, c, es):
    se = np.sqrt(es)
    h_sd = np.atleast_2d(np.asarray(h_sd, dtype=np.complex128))
    return (np.ascontiguousarray(np.atleast_1d(y1), dtype=np.complex128),
            np.ascontiguousarray(np.atleast_1d(y2), dtype=np.complex128),
            np.ascontiguousarray(h_sd * c.a * se),
            np.ascontiguousarray(h_sd * c.b * se),
            np.ascontiguousarray(np.atleast_1d(h_rd) * se, dtype=np.complex128))


def decode_batch(kind, y1, y2, h_sd, h_rd, c, cube, ss, es, pivot=None,
                 return_evals=False, qr=None):
    """Decode a batch of trials.

    Returns ``(index, metric, branch)`` arrays, plus the total number of
    scored hypotheses when ``return_evals`` is set.
    """
    be = kernels.get_backend()
    m, k = ss.order, c.K
    log_snr = float(np.log(es))
    if kind == "novel_fast" and log_snr >= 0.0:
        out = _fast_batch(be, y1, y2, h_sd, h_rd, c, cube, ss, es, log_snr,
                          pivot, qr)
    elif kind in ("naive", "novel_exhaustive", "novel_fast"):
        if kind == "novel_fast" and hr_pivot(c) is None:
            raise PreconditionError("no source weight matrix is H-R orthogonal with W_R")
        args = _batch_inputs(y1, y2, h_sd, h_rd, c, es) + (
            ss.points, candidate_table(m, k), cube.flat)
        if kind == "naive":
            out = be.dest_naive(*args)
        else:
            # for es < 1 the log(SNR) + m3 rewrite no longer equals the
            # decoder, so the fast path defers to the exhaustive search
            out = be.dest_novel(*args, log_snr)
    else:
        raise ValueError(f"unknown decoder {kind!r}; choose from {DECODERS}")
    return out if return_evals else out[:3]


def _fast_batch(be, y1, y2, h_sd, h_rd, c, cube, ss, es, log_snr, pivot, qr):
    if pivot is None:
        pivot = hr_pivot(c)
        if pivot is None:
            raise PreconditionError("no source weight matrix is H-R orthogonal with W_R")
    m, k = ss.order, c.K
    order = [pivot] + [i for i in range(k) if i != pivot]
    if qr is None:
        h_sd = np.atleast_2d(np.asarray(h_sd, dtype=np.complex128))[:, order]
        h_rd = np.atleast_1d(np.asarray(h_rd, dtype=np.complex128))
        heq = build_heq(_Fades(h_sd, h_rd), c.permuted(order))
        y = np.stack([np.atleast_1d(y1), np.atleast_1d(y2)], axis=1)
        _, r, y_t = qr_batch(heq, y)
    else:
        r = np.asarray(qr.r).reshape(-1, 2, k + 1)
        y_t = np.asarray(qr.y_tilde).reshape(-1, 2)
    rs = np.ascontiguousarray(r * np.sqrt(es))
    fflat = np.ascontiguousarray(cube.permuted(order).flat)
    idx, met, br, evals = be.dest_fast(
        np.ascontiguousarray(y_t[:, 0]), np.ascontiguousarray(y_t[:, 1]), rs,
        ss.points, candidate_table(m, k - 1), fflat, log_snr)
    if pivot != 0:
        labels = np.stack(np.unravel_index(idx, (m,) * k), axis=1)
        back = np.empty_like(labels)
        back[:, order] = labels
        idx = np.ravel_multi_index(tuple(back.T), (m,) * k)
    return idx, met, br, evals


@dataclass(frozen=True)
class _Fades:
    h_SD: np.ndarray
    h_RD: np.ndarray


# -- single-instance wrappers ------------------------------------------------

def _decide(kind, obs, ch, c, f, es, ss, qr=None):
    idx, met, br = decode_batch(kind, obs.y_D1, obs.y_D2, ch.h_SD, ch.h_RD,
                                c, f, ss, es, qr=qr)
    labels = tuple(int(v) for v in np.unravel_index(int(idx[0]), (ss.order,) * c.K))
    return DestinationDecision(labels, Branch(int(br[0])), float(met[0]))


def decode_naive(obs, ch, c, f, es, ss):
    """Minimum squared-distance decoder that trusts the relay (argmin of m1)."""
    return _decide("naive", obs, ch, c, f, es, ss)


def decode_novel_exhaustive(obs, ch, c, f, es, ss):
    """Argmin over tuples of ``min(m1, log(es) + m2)``; exact arm ties go to m1."""
    return _decide("novel_exhaustive", obs, ch, c, f, es, ss)


def decode_novel_fast(obs, ch, c, f, es, ss, qr=None):
    """Fast implementation of :func:`decode_novel_exhaustive`.

    Needs some source ``i`` with ``b_i == 0``; that source is moved to the
    front, the rest of the decoding searches ``M**(K-1)`` fixings with one
    pass over the constellation each. A precomputed ``qr`` must factor
    ``H_eq`` with the pivot source's column first (for ``b_1 == 0`` that is
    just ``qr_2xn(build_heq(ch, c), [y_D1, y_D2])``).

    Raises
    ------
    PreconditionError
        If no weight matrix is H-R orthogonal with the relay's.
    """
    if hr_pivot(c) is None:
        raise PreconditionError("no source weight matrix is H-R orthogonal with W_R")
    return _decide("novel_fast", obs, ch, c, f, es, ss, qr=qr)
