import itertools

import numpy as np
import pytest

from marcpnc.channel import (ChannelRealization, LinkVariances, draw_channel,
                             phase1_receive)
from marcpnc.codebook import CoefficientSet, example_coefficients
from marcpnc.netcode import LatinHypercube, modular_sum_hypercube
from marcpnc.relay import relay_ml_batch, relay_ml_estimate
from marcpnc.signal import make_psk


def brute_relay(y_r, h_sr, a, pts, es):
    best, arg = np.inf, None
    for t in itertools.product(range(len(pts)), repeat=len(a)):
        s = sum(h_sr[i] * np.sqrt(es) * a[i] * pts[t[i]] for i in range(len(a)))
        d = abs(y_r - s) ** 2
        if d < best:
            best, arg = d, t
    return arg, best


class TestRelay:

    def test_noiseless_recovery(self, backend, rng, psk4):
        c, cube = example_coefficients(3), modular_sum_hypercube(4, 3)
        for _ in range(50):
            ch = draw_channel(LinkVariances.unit(3), rng)
            msg = tuple(int(v) for v in rng.integers(0, 4, size=3))
            y_r, _ = phase1_receive(psk4.points[list(msg)], ch, c, 10.0, rng, 0)
            dec = relay_ml_estimate(y_r, ch, c, psk4, 10.0, cube)
            assert dec.labels == msg
            assert dec.relay_label == cube(*msg)

    def test_bpsk_nearest_point(self, backend):
        ss = make_psk(2)
        ch = ChannelRealization(np.array([1 + 0j]), np.array([1 + 0j]), 1 + 0j)
        dec = relay_ml_estimate(0.9 + 0j, ch, CoefficientSet([1], [0]), ss, 1.0,
                                LatinHypercube(np.arange(2)))
        assert dec.labels == (0,)

    def test_matches_brute_force(self, backend, rng, psk4):
        c, cube = example_coefficients(3), modular_sum_hypercube(4, 3)
        for _ in range(100):
            ch = draw_channel(LinkVariances.unit(3), rng)
            y_r = complex(rng.standard_normal() * 3 + 3j * rng.standard_normal())
            dec = relay_ml_estimate(y_r, ch, c, psk4, 5.0, cube)
            arg, best = brute_relay(y_r, ch.h_SR, c.a, psk4.points, 5.0)
            assert dec.labels == arg

    def test_minimum_over_all_tuples(self, backend, rng, psk4):
        # the returned residual is <= that of every tuple (K=4, M=4)
        c = example_coefficients(4)
        n = 200
        ch = draw_channel(LinkVariances.unit(4), rng, n=n)
        y_r = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        idx = relay_ml_batch(y_r, ch.h_SR, c, psk4, 2.0)
        cand = np.array(list(itertools.product(range(4), repeat=4)))
        s = (ch.h_SR * c.a * np.sqrt(2.0)) @ psk4.points[cand].T
        res = np.abs(y_r[:, None] - s) ** 2
        chosen = res[np.arange(n), idx]
        assert np.all(chosen <= res.min(axis=1) + 1e-12)

    def test_tie_break_lexicographic(self, backend, psk4):
        # zero fades make every tuple tie; the first tuple wins
        ch = ChannelRealization(np.zeros(3, complex), np.zeros(3, complex), 0j)
        dec = relay_ml_estimate(0.3 + 0j, ch, example_coefficients(3), psk4, 1.0,
                                modular_sum_hypercube(4, 3))
        assert dec.labels == (0, 0, 0)
