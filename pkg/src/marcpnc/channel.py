"""Quasi-static Rayleigh fading and the two-phase received signals.

All functions broadcast over a leading batch axis: a realization drawn
with ``n`` given has fields of shape ``(n, K)`` / ``(n,)``, and symbol
arrays of shape ``(n, K)`` produce observations of shape ``(n,)``.
Noise is ``CN(0, 1)``; the SNR is the symbol energy ``es``.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["LinkVariances", "ChannelRealization", "ReceivedSignals",
           "db_to_linear", "complex_normal", "draw_channel",
           "phase1_receive", "phase2_receive"]


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


@dataclass(frozen=True, eq=False)
class LinkVariances:
    """Linear-scale fade variances of the S-R, S-D and R-D links."""

    sigma2_SR: np.ndarray
    sigma2_SD: np.ndarray
    sigma2_RD: float

    def __post_init__(self):
        sr = np.array(self.sigma2_SR, dtype=float).reshape(-1)
        sd = np.array(self.sigma2_SD, dtype=float).reshape(-1)
        rd = float(self.sigma2_RD)
        if sr.size != sd.size:
            raise ValueError("sigma2_SR and sigma2_SD need one entry per source")
        if np.any(sr <= 0) or np.any(sd <= 0) or rd <= 0:
            raise ValueError("link variances must be strictly positive")
        object.__setattr__(self, "sigma2_SR", sr)
        object.__setattr__(self, "sigma2_SD", sd)
        object.__setattr__(self, "sigma2_RD", rd)

    @property
    def K(self):
        return self.sigma2_SR.size

    @classmethod
    def from_db(cls, sr_db, sd_db, rd_db, K=None):
        """Build from dB values; scalars are broadcast to ``K`` sources."""
        sr = np.atleast_1d(np.asarray(sr_db, dtype=float))
        sd = np.atleast_1d(np.asarray(sd_db, dtype=float))
        if K is not None:
            sr = np.broadcast_to(sr, (K,))
            sd = np.broadcast_to(sd, (K,))
        return cls(db_to_linear(sr), db_to_linear(sd), float(db_to_linear(rd_db)))

    @classmethod
    def unit(cls, K):
        return cls(np.ones(K), np.ones(K), 1.0)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    h_SR: np.ndarray
    h_SD: np.ndarray
    h_RD: np.ndarray

    @property
    def K(self):
        return np.shape(self.h_SR)[-1]


@dataclass(frozen=True, eq=False)
class ReceivedSignals:
    y_R: np.ndarray
    y_D1: np.ndarray
    y_D2: np.ndarray


def complex_normal(rng, shape, variance=1.0):
    """Circularly-symmetric complex Gaussian samples, real/imag each
    ``N(0, variance/2)``. Real and imaginary parts come from one call so
    that the draw order is fixed."""
    shape = tuple(shape) if np.iterable(shape) else (int(shape),)
    g = rng.standard_normal(shape + (2,))
    return np.sqrt(np.asarray(variance) / 2.0) * (g[..., 0] + 1j * g[..., 1])


def draw_channel(v, rng, n=None):
    """One quasi-static draw of all ``2K + 1`` fades (``n`` draws if given).

    The realization is held fixed across both phases of a trial.
    """
    lead = () if n is None else (n,)
    h_sr = complex_normal(rng, lead + (v.K,), v.sigma2_SR)
    h_sd = complex_normal(rng, lead + (v.K,), v.sigma2_SD)
    h_rd = complex_normal(rng, lead, v.sigma2_RD)
    return ChannelRealization(h_sr, h_sd, h_rd)


def _noise(rng, shape, noise_scale):
    z = complex_normal(rng, shape)
    return z * noise_scale


def phase1_receive(x, ch, c, es, rng, noise_scale=1.0):
    """Phase-1 observations ``(y_R, y_D1)``.

    ``noise_scale=0`` suppresses the additive noise; it exists for
    deterministic pipeline tests. Noise is drawn in the order
    ``z_R, z_D1`` even when suppressed, so the RNG stream is unchanged.
    """
    x = np.asarray(x, dtype=np.complex128)
    se = np.sqrt(es)
    shape = x.shape[:-1]
    y_r = np.sum(ch.h_SR * se * c.a * x, axis=-1)
    y_d1 = np.sum(ch.h_SD * se * c.a * x, axis=-1)
    return y_r + _noise(rng, shape, noise_scale), y_d1 + _noise(rng, shape, noise_scale)


def phase2_receive(x, x_R, ch, c, es, rng, noise_scale=1.0):
    """Phase-2 observation at the destination; the relay sends ``x_R``."""
    x = np.asarray(x, dtype=np.complex128)
    se = np.sqrt(es)
    y = np.sum(ch.h_SD * se * c.b * x, axis=-1) + ch.h_RD * se * np.asarray(x_R)
    return y + _noise(rng, x.shape[:-1], noise_scale)
