import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marcpnc.netcode import (LatinHypercube, evaluate, load_hypercube,
                             modular_sum_hypercube, validate_hypercube)

# the printed order-4 Latin square
FIG_SQUARE = np.array([[0, 1, 2, 3],
                       [1, 2, 3, 0],
                       [2, 3, 0, 1],
                       [3, 0, 1, 2]])


class TestModularSum:

    def test_matches_printed_square(self):
        np.testing.assert_array_equal(modular_sum_hypercube(4, 2).entries, FIG_SQUARE)

    def test_entries(self):
        sq = modular_sum_hypercube(4, 2)
        assert evaluate(sq, (1, 2)) == 3
        assert evaluate(sq, (3, 3)) == 2
        assert evaluate(sq, (0, 0)) == 0
        assert evaluate(sq, (2, 1)) == 3
        cube = modular_sum_hypercube(4, 3)
        assert cube(1, 1, 1) == 3
        assert cube(2, 3, 3) == 0

    @pytest.mark.parametrize("M,K", [(1, 2), (4, 1), (0, 3)])
    def test_below_minimum(self, M, K):
        with pytest.raises(ValueError):
            modular_sum_hypercube(M, K)

    @pytest.mark.parametrize("M", [2, 4, 8])
    @pytest.mark.parametrize("K", [2, 3, 4])
    def test_always_latin(self, M, K):
        assert validate_hypercube(modular_sum_hypercube(M, K)) is None


class TestValidate:

    def test_map_ignoring_second_argument(self):
        # f(x1, x2) = x1
        h = LatinHypercube(np.repeat(np.arange(4)[:, None], 4, axis=1))
        v = validate_hypercube(h)
        assert v is not None
        assert v.axis == 1
        assert v.fixed == (0, None)

    def test_copied_neighbour_cell(self, rng):
        for _ in range(20):
            e = np.array(modular_sum_hypercube(4, 3).entries)
            idx = tuple(rng.integers(0, 4, size=3))
            axis = int(rng.integers(0, 3))
            nb = list(idx)
            nb[axis] = (nb[axis] + 1) % 4
            e[tuple(nb)] = e[idx]
            v = validate_hypercube(LatinHypercube(e))
            assert v is not None

    def test_report_is_first_in_scan_order(self):
        e = np.array(FIG_SQUARE)
        e[2, 3] = e[2, 2]   # breaks row 2 (axis 1) and column 3 (axis 0)
        v = validate_hypercube(LatinHypercube(e))
        assert (v.axis, v.fixed) == (0, (None, 3))

    @settings(max_examples=50, deadline=None)
    @given(st.sampled_from([2, 4, 8]), st.integers(2, 4), st.data())
    def test_exclusive_law(self, M, K, data):
        # fixing all but one coordinate, the map is a bijection on labels
        h = modular_sum_hypercube(M, K)
        i = data.draw(st.integers(0, K - 1))
        rest = data.draw(st.lists(st.integers(0, M - 1), min_size=K, max_size=K))
        vals = set()
        for s in range(M):
            rest[i] = s
            vals.add(h(*rest))
        assert vals == set(range(M))


class TestEvaluate:

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            evaluate(modular_sum_hypercube(4, 3), (0, 4, 1))

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            evaluate(modular_sum_hypercube(4, 3), (0, 1))

    def test_flat_is_lexicographic(self):
        h = modular_sum_hypercube(4, 3)
        for n, t in enumerate(itertools.product(range(4), repeat=3)):
            assert h.flat[n] == h(*t)


class TestSerialization:

    @pytest.mark.parametrize("M,K", [(2, 2), (4, 3), (4, 4), (8, 3)])
    def test_roundtrip(self, M, K):
        h = modular_sum_hypercube(M, K)
        assert LatinHypercube.from_text(h.to_text()) == h

    def test_header_format(self):
        text = modular_sum_hypercube(4, 2).to_text()
        lines = text.splitlines()
        assert lines[0] == "4 2"
        assert lines[1].split() == [str(v) for v in FIG_SQUARE.reshape(-1)]

    def test_loader_validates(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("2 2\n0 0 1 1\n")
        with pytest.raises(ValueError, match="not a Latin"):
            load_hypercube(p)

    def test_loader_entry_count(self):
        with pytest.raises(ValueError, match="expected 16"):
            LatinHypercube.from_text("4 2\n0 1 2\n")

    def test_missing_file_names_path(self, tmp_path):
        with pytest.raises(OSError, match="nope.txt"):
            load_hypercube(tmp_path / "nope.txt")
