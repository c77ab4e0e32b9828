import numpy as np
import pytest

from marcpnc import kernels
from marcpnc.channel import complex_normal
from marcpnc.codebook import example_coefficients
from marcpnc.decoder import decode_batch
from marcpnc.relay import relay_ml_batch

needs_numba = pytest.mark.skipif("numba" not in kernels.available_backends(),
                                 reason="numba not installed")


def run_all(scheme, rng_seed, es, n=300):
    rng = np.random.default_rng(rng_seed)
    c, cube, ss = scheme.coefficients, scheme.hypercube, scheme.signal_set
    k = c.K
    h_sr, h_sd = complex_normal(rng, (n, k)), complex_normal(rng, (n, k))
    h_rd = complex_normal(rng, n)
    y_r, y1, y2 = (complex_normal(rng, n, 1 + es) for _ in range(3))
    out = {"relay": relay_ml_batch(y_r, h_sr, c, ss, es)}
    for kind in ("naive", "novel_exhaustive", "novel_fast"):
        out[kind] = decode_batch(kind, y1, y2, h_sd, h_rd, c, cube, ss, es,
                                 return_evals=True)
    return out


class TestBackends:

    def test_unknown_backend(self):
        with pytest.raises(ValueError, match="unknown backend"):
            kernels.get_backend("fortran")

    def test_numpy_always_available(self):
        assert "numpy" in kernels.available_backends()

    def test_shared_constants(self):
        for name in kernels.available_backends():
            be = kernels.get_backend(name)
            assert be.NAME == name
            assert (be.RELAY_CORRECT, be.RELAY_ERROR) == (0, 1)

    @needs_numba
    @pytest.mark.parametrize("es", [0.5, 1.0, 10.0, 1000.0])
    @pytest.mark.parametrize("which", ["scheme3", "scheme4"])
    def test_backends_agree(self, request, which, es):
        scheme = request.getfixturevalue(which)
        prev = kernels.get_backend().NAME
        try:
            res = {}
            for name in ("numpy", "numba"):
                kernels.set_backend(name)
                res[name] = run_all(scheme, 5, es, n=300 if which == "scheme3" else 40)
        finally:
            kernels.set_backend(prev)
        a, b = res["numpy"], res["numba"]
        np.testing.assert_array_equal(a["relay"], b["relay"])
        for kind in ("naive", "novel_exhaustive", "novel_fast"):
            np.testing.assert_array_equal(a[kind][0], b[kind][0])
            np.testing.assert_allclose(a[kind][1], b[kind][1], rtol=1e-12, atol=1e-12)
            np.testing.assert_array_equal(a[kind][2], b[kind][2])
            assert a[kind][3] == b[kind][3]

    def test_lowest_index_wins_exact_ties(self, backend, scheme3):
        # all-zero observations and fades: every hypothesis scores the same
        c, cube, ss = scheme3.coefficients, scheme3.hypercube, scheme3.signal_set
        z = np.zeros(3, complex)
        h = np.zeros((3, 3), complex)
        for kind in ("naive", "novel_exhaustive", "novel_fast"):
            idx = decode_batch(kind, z, z, h, z, c, cube, ss, 10.0)[0]
            assert np.all(idx == 0)
        assert np.all(relay_ml_batch(z, h, c, ss, 10.0) == 0)

    def test_empty_batch(self, backend, scheme3):
        c, cube, ss = scheme3.coefficients, scheme3.hypercube, scheme3.signal_set
        e = np.zeros(0, complex)
        idx, metric, branch = decode_batch("novel_fast", e, e, np.zeros((0, 3), complex),
                                           e, c, cube, ss, 10.0)
        assert idx.shape == metric.shape == branch.shape == (0,)
