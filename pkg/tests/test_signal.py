import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from marcpnc.signal import SignalSet, demap, difference_set, make_psk, map_bits


class TestMakePsk:

    def test_qpsk_label_order(self):
        np.testing.assert_array_equal(make_psk(4).points, [1, 1j, -1, -1j])

    def test_bpsk(self):
        np.testing.assert_array_equal(make_psk(2).points, [1, -1])

    @pytest.mark.parametrize("M", [0, 1, 3, 6, 12])
    def test_invalid_order(self, M):
        with pytest.raises(ValueError, match="invalid M"):
            make_psk(M)

    @pytest.mark.parametrize("M", [2, 4, 8, 16, 64])
    def test_unit_modulus_and_energy(self, M):
        ss = make_psk(M)
        assert ss.bits_per_symbol == int(np.log2(M))
        np.testing.assert_allclose(np.abs(ss.points), 1.0, atol=1e-15)
        assert abs(np.mean(np.abs(ss.points) ** 2) - 1) <= 1e-12

    def test_rejects_non_unit_energy(self):
        with pytest.raises(ValueError, match="energy"):
            SignalSet(np.array([2, -2]), 1)

    def test_rejects_repeated_points(self):
        with pytest.raises(ValueError, match="distinct"):
            SignalSet(np.array([1, 1, -1, -1]), 2)


class TestBits:

    def test_examples(self):
        assert map_bits([0, 0], 2) == 0
        assert map_bits([1, 1], 2) == 3
        assert map_bits([1, 0], 2) == 2

    def test_wrong_length(self):
        with pytest.raises(ValueError, match="expected 2 bits"):
            map_bits([1, 0, 1], 2)

    def test_roundtrip_all_two_bit_vectors(self):
        for bits in itertools.product([0, 1], repeat=2):
            np.testing.assert_array_equal(demap(map_bits(bits, 2), 2), bits)

    @given(st.integers(1, 10).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(0, 2 ** n - 1))))
    def test_bijection(self, case):
        n, label = case
        assert map_bits(demap(label, n), n) == label


class TestDifferenceSet:

    def test_qpsk_matches_enumeration(self):
        # oracle: all 16 ordered pairs rounded onto a grid, then deduplicated
        pts = [1, 1j, -1, -1j]
        expect = {complex(round((x - y).real, 9), round((x - y).imag, 9))
                  for x in pts for y in pts}
        ds = difference_set(make_psk(4))
        assert len(ds) == len(expect) == 9
        for d in expect:
            assert d in ds
        for d in (0, 2, -2, 1 - 1j):
            assert d in ds

    def test_bpsk(self):
        ds = difference_set(make_psk(2))
        assert sorted(ds.values.real) == [-2, 0, 2]

    @pytest.mark.parametrize("M", [2, 4, 8, 16])
    def test_negation_closed(self, M):
        ds = difference_set(make_psk(M))
        assert 0 in ds
        assert len(ds) <= M * M
        for d in ds.values:
            assert -d in ds
