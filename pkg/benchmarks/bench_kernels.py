"""Time the decoding kernels and a short sweep on each available backend.

Usage: python3 benchmarks/bench_kernels.py [--trials N] [--repeat R]
"""

import argparse
import time

import numpy as np

from marcpnc import kernels
from marcpnc.channel import complex_normal
from marcpnc.codebook import example_coefficients
from marcpnc.decoder import decode_batch
from marcpnc.mc_sim import ExperimentSpec, SchemeConfig, run_experiment
from marcpnc.netcode import modular_sum_hypercube
from marcpnc.relay import relay_ml_batch
from marcpnc.signal import make_psk


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=20_000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()

    n, es = args.trials, 100.0
    rng = np.random.default_rng(0)
    rows = []
    for K in (3, 4):
        sch = SchemeConfig(make_psk(4), example_coefficients(K), modular_sum_hypercube(4, K))
        c, cube, ss = sch.coefficients, sch.hypercube, sch.signal_set
        m = n if K == 3 else n // 4
        h_sr, h_sd = complex_normal(rng, (m, K)), complex_normal(rng, (m, K))
        h_rd = complex_normal(rng, m)
        y_r, y1, y2 = (complex_normal(rng, m, 1 + es) for _ in range(3))
        jobs = {"relay_ml": lambda: relay_ml_batch(y_r, h_sr, c, ss, es)}
        for kind in ("naive", "novel_exhaustive", "novel_fast"):
            jobs[kind] = (lambda kind=kind:
                          decode_batch(kind, y1, y2, h_sd, h_rd, c, cube, ss, es))
        for name, fn in jobs.items():
            for be in kernels.available_backends():
                kernels.set_backend(be)
                t = best_of(fn, args.repeat)
                rows.append((f"K={K} {name}", be, m, t))

    spec = ExperimentSpec(SchemeConfig(make_psk(4), example_coefficients(3),
                                       modular_sum_hypercube(4, 3)),
                          (15, 20, 25, 30), seed=1)
    for be in kernels.available_backends():
        kernels.set_backend(be)
        t = best_of(lambda: run_experiment(spec, workers=1), 1)
        rows.append(("K=3 sweep 15-30 dB", be, None, t))

    print(f"{'job':28} {'backend':8} {'trials':>8} {'seconds':>9} {'us/trial':>9}")
    for job, be, m, t in rows:
        per = f"{1e6 * t / m:9.2f}" if m else f"{'':9}"
        print(f"{job:28} {be:8} {m or '':>8} {t:9.4f} {per}")


if __name__ == "__main__":
    main()
