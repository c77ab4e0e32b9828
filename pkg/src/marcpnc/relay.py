"""Joint ML detection at the relay and the network-coded relay symbol."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .netcode import candidate_table

__all__ = ["RelayDecision", "relay_ml_estimate", "relay_ml_batch"]


@dataclass(frozen=True)
class RelayDecision:
    labels: tuple
    relay_label: int


def relay_ml_batch(y_R, h_SR, c, ss, es):
    """Lexicographic index of the ML tuple for each trial.

    Exhaustive over all ``M**K`` tuples of the squared residual
    ``|y_R - sum_i h_SR_i sqrt(es) a_i x_i|**2``; ties go to the smallest
    index.
    """
    y_R = np.ascontiguousarray(np.atleast_1d(y_R), dtype=np.complex128)
    h = np.atleast_2d(np.asarray(h_SR, dtype=np.complex128))
    g = np.ascontiguousarray(h * c.a * np.sqrt(es))
    cand = candidate_table(ss.order, c.K)
    return kernels.get_backend().relay_ml(y_R, g, ss.points, cand)


def relay_ml_estimate(y_R, ch, c, ss, es, cube):
    idx = int(relay_ml_batch(y_R, ch.h_SR, c, ss, es)[0])
    labels = tuple(int(v) for v in np.unravel_index(idx, (ss.order,) * c.K))
    return RelayDecision(labels, int(cube.flat[idx]))
