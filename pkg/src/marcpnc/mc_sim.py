"""Monte-Carlo engine: trials, adaptive SEP estimation, sweeps and
diversity-slope fits.

Randomness is counter based. Trials are grouped in fixed blocks of
``BLOCK_TRIALS``; block ``b`` at SNR ``s`` draws from a Philox stream keyed
by ``(seed, s, b)``. Blocks may be simulated in any order or on any number
of threads, and the stopping rule scans outcomes in trial order, so a
curve depends only on the ExperimentSpec and its seed.
"""

import csv
import io
import json
import logging
import os
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .channel import LinkVariances, draw_channel, phase1_receive, phase2_receive
from .decoder import DECODERS, decode_batch
from .relay import relay_ml_batch

__all__ = ["SchemeConfig", "ExperimentSpec", "SepPoint", "SepCurve",
           "SlopeEstimate", "TrialOutcome", "BlockOutcome", "ExperimentResult",
           "InsufficientPointsError", "BLOCK_TRIALS", "WORKERS_ENV",
           "simulate_block", "run_trial", "estimate_sep",
           "fit_diversity_slope", "run_experiment", "default_workers",
           "version_string"]

log = logging.getLogger(__name__)

BLOCK_TRIALS = 2048
WORKERS_ENV = "MARCPNC_WORKERS"
CSV_COLUMNS = ("snr_db", "trials", "errors", "sep", "stderr", "relay_map_error_rate")


class InsufficientPointsError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SchemeConfig:
    signal_set: object
    coefficients: object
    hypercube: object

    @property
    def K(self):
        return self.coefficients.K

    @property
    def M(self):
        return self.signal_set.order

    def __post_init__(self):
        if self.hypercube.dimension != self.K or self.hypercube.order != self.M:
            raise ValueError(
                f"hypercube is order {self.hypercube.order}, dimension "
                f"{self.hypercube.dimension}; scheme needs M={self.M}, K={self.K}")


@dataclass(frozen=True, eq=False)
class ExperimentSpec:
    """One sweep. Link variances are given in dB, per source or as scalars."""

    scheme: SchemeConfig
    snr_grid_db: tuple
    decoder: str = "novel_fast"
    sigma2_SR_db: object = 0.0
    sigma2_SD_db: object = 0.0
    sigma2_RD_db: float = 0.0
    min_trials: int = 1000
    max_trials: int = 2_000_000
    target_errors: int = 100
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(s) for s in self.snr_grid_db)
        object.__setattr__(self, "snr_grid_db", grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("snr_grid_db must be nonempty and strictly increasing")
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}; choose from {DECODERS}")
        if not 1 <= self.min_trials <= self.max_trials:
            raise ValueError("need 1 <= min_trials <= max_trials")
        if self.target_errors < 1:
            raise ValueError("target_errors must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        self.variances  # validates shapes and positivity

    @property
    def variances(self):
        return LinkVariances.from_db(self.sigma2_SR_db, self.sigma2_SD_db,
                                     self.sigma2_RD_db, K=self.scheme.K)

    def echo(self):
        c = self.scheme.coefficients
        return {
            "K": self.scheme.K,
            "M": self.scheme.M,
            "coefficients": [[ai.real, ai.imag, bi.real, bi.imag]
                             for ai, bi in zip(c.a, c.b)],
            "hypercube": self.scheme.hypercube.flat.tolist(),
            "sigma2_SR_db": np.atleast_1d(self.sigma2_SR_db).tolist(),
            "sigma2_SD_db": np.atleast_1d(self.sigma2_SD_db).tolist(),
            "sigma2_RD_db": float(self.sigma2_RD_db),
            "snr_grid_db": list(self.snr_grid_db),
            "decoder": self.decoder,
            "min_trials": self.min_trials,
            "max_trials": self.max_trials,
            "target_errors": self.target_errors,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class TrialOutcome:
    tuple_correct: bool
    relay_map_correct: bool


@dataclass(frozen=True, eq=False)
class BlockOutcome:
    tuple_error: np.ndarray
    relay_error: np.ndarray


@dataclass(frozen=True)
class SepPoint:
    snr_db: float
    trials: int
    errors: int
    relay_map_errors: int = 0
    hit_max_trials: bool = False

    @property
    def sep(self):
        return self.errors / self.trials

    @property
    def stderr(self):
        p = self.sep
        return float(np.sqrt(p * (1.0 - p) / self.trials))

    @property
    def relay_map_error_rate(self):
        return self.relay_map_errors / self.trials


@dataclass
class SepCurve:
    points: list
    target_errors: int = 100

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for p in self.points:
            w.writerow([repr(p.snr_db), p.trials, p.errors, repr(p.sep),
                        repr(p.stderr), repr(p.relay_map_error_rate)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, target_errors=100):
        rows = list(csv.DictReader(io.StringIO(text)))
        missing = set(CSV_COLUMNS) - set(rows[0] if rows else CSV_COLUMNS)
        if missing:
            raise ValueError(f"curve CSV lacks columns {sorted(missing)}")
        pts = []
        for r in rows:
            trials = int(r["trials"])
            relay = int(round(float(r["relay_map_error_rate"]) * trials))
            pts.append(SepPoint(float(r["snr_db"]), trials, int(r["errors"]), relay))
        return cls(pts, target_errors)


@dataclass(frozen=True)
class SlopeEstimate:
    slope: float
    fit_points: tuple
    residual: float


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def _block_rng(seed, snr_db, block):
    # snr in milli-dB, offset to stay nonnegative for SeedSequence
    snr_key = int(round(snr_db * 1000)) + (1 << 31)
    ss = np.random.SeedSequence(seed, spawn_key=(snr_key, block))
    return np.random.Generator(np.random.Philox(ss))


def simulate_block(spec, snr_db, block, noise_scale=1.0):
    """Simulate trials ``block*BLOCK_TRIALS ... (block+1)*BLOCK_TRIALS - 1``.

    Per block the draw order is: messages, fades (S-R, S-D, R-D), phase-1
    noise, phase-2 noise. ``noise_scale`` is a test hook; 0 removes noise.
    """
    sch = spec.scheme
    c, cube, ss = sch.coefficients, sch.hypercube, sch.signal_set
    m, k, n = sch.M, sch.K, BLOCK_TRIALS
    es = 10.0 ** (snr_db / 10.0)
    rng = _block_rng(spec.seed, snr_db, block)
    msgs = rng.integers(0, m, size=(n, k))
    ch = draw_channel(spec.variances, rng, n)
    x = ss.points[msgs]
    y_r, y_d1 = phase1_receive(x, ch, c, es, rng, noise_scale)
    ridx = relay_ml_batch(y_r, ch.h_SR, c, ss, es)
    relay_label = cube.flat[ridx]
    y_d2 = phase2_receive(x, ss.points[relay_label], ch, c, es, rng, noise_scale)
    didx, _, _ = decode_batch(spec.decoder, y_d1, y_d2, ch.h_SD, ch.h_RD,
                              c, cube, ss, es)
    true_idx = np.ravel_multi_index(tuple(msgs.T), (m,) * k)
    return BlockOutcome(didx != true_idx, relay_label != cube.flat[true_idx])


def run_trial(spec, snr_db, trial_index, noise_scale=1.0):
    block, off = divmod(int(trial_index), BLOCK_TRIALS)
    out = simulate_block(spec, snr_db, block, noise_scale)
    return TrialOutcome(not bool(out.tuple_error[off]),
                        not bool(out.relay_error[off]))


def estimate_sep(spec, snr_db, workers=None, simulate=simulate_block):
    """Adaptive SEP estimate at one SNR.

    Stops at the first trial where ``errors >= target_errors`` and
    ``trials >= min_trials``, or at ``max_trials``. ``simulate`` maps
    ``(spec, snr_db, block)`` to a :class:`BlockOutcome` and can be swapped
    in tests.
    """
    workers = workers or default_workers()
    trials = errors = relay = 0
    block = 0
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while True:
            ids = range(block, block + workers)
            if pool is None:
                outs = [simulate(spec, snr_db, b) for b in ids]
            else:
                outs = list(pool.map(lambda b: simulate(spec, snr_db, b), ids))
            block += workers
            for out in outs:
                err = np.asarray(out.tuple_error, dtype=bool)
                cum = errors + np.cumsum(err)
                t = trials + np.arange(1, err.size + 1)
                stop = (cum >= spec.target_errors) & (t >= spec.min_trials)
                stop |= t >= spec.max_trials
                if stop.any():
                    last = int(np.argmax(stop)) + 1
                    trials += last
                    errors += int(err[:last].sum())
                    relay += int(np.count_nonzero(out.relay_error[:last]))
                    capped = errors < spec.target_errors
                    if capped:
                        log.warning("SNR %.2f dB: max_trials=%d reached with %d errors",
                                    snr_db, spec.max_trials, errors)
                    return SepPoint(float(snr_db), trials, errors, relay, capped)
                trials += err.size
                errors += int(err.sum())
                relay += int(np.count_nonzero(out.relay_error))
    finally:
        if pool is not None:
            pool.shutdown()


def fit_diversity_slope(curve, high_snr_window=None, metric="sep"):
    """Least-squares slope of ``-log10(rate)`` against ``snr_db / 10``.

    Only points with at least ``curve.target_errors`` error events count;
    the fit uses the last ``high_snr_window`` of them (all if ``None``).
    ``metric`` is ``"sep"`` or ``"relay_map_error_rate"``.

    Raises
    ------
    InsufficientPointsError
        If fewer than two points qualify.
    """
    if metric == "sep":
        counts = [p.errors for p in curve.points]
    elif metric == "relay_map_error_rate":
        counts = [p.relay_map_errors for p in curve.points]
    else:
        raise ValueError(f"unknown metric {metric!r}")
    idx = [i for i, n in enumerate(counts) if n >= curve.target_errors and n > 0]
    if high_snr_window is not None:
        idx = idx[-high_snr_window:] if high_snr_window > 0 else []
    if len(idx) < 2:
        raise InsufficientPointsError(
            f"need >= 2 points with >= {curve.target_errors} errors, have {len(idx)}")
    x = np.array([curve.points[i].snr_db / 10.0 for i in idx])
    y = np.array([-np.log10(getattr(curve.points[i], metric)) for i in idx])
    coef = np.polyfit(x, y, 1)
    resid = y - np.polyval(coef, x)
    return SlopeEstimate(float(coef[0]), tuple(idx), float(np.sqrt(np.mean(resid ** 2))))


def version_string():
    """``git describe``-style version, falling back to the package version."""
    here = Path(__file__).resolve().parent
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                             cwd=here, capture_output=True, text=True, timeout=10)
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    from . import __version__
    return __version__


@dataclass
class ExperimentResult:
    curve: SepCurve
    slope: SlopeEstimate = None
    relay_slope: SlopeEstimate = None
    files: dict = field(default_factory=dict)


def run_experiment(spec, out_dir=None, workers=None, slope_window=None):
    """Sweep the SNR grid; write ``curve.csv`` and ``manifest.json`` when
    ``out_dir`` is given."""
    workers = workers or default_workers()
    pts = [estimate_sep(spec, s, workers) for s in spec.snr_grid_db]
    curve = SepCurve(pts, spec.target_errors)
    res = ExperimentResult(curve)
    for name, metric in (("slope", "sep"), ("relay_slope", "relay_map_error_rate")):
        try:
            setattr(res, name, fit_diversity_slope(curve, slope_window, metric))
        except InsufficientPointsError as exc:
            log.info("no %s fit: %s", metric, exc)
    if out_dir is not None:
        out_dir = Path(out_dir)
        csv_path, man_path = out_dir / "curve.csv", out_dir / "manifest.json"
        manifest = {
            "spec": spec.echo(),
            "version": version_string(),
            "backend": kernels.get_backend().NAME,
            "workers": workers,
            "block_trials": BLOCK_TRIALS,
            "capped_points": [p.snr_db for p in pts if p.hit_max_trials],
            "diversity_slope": None if res.slope is None else res.slope.slope,
            "relay_map_slope": None if res.relay_slope is None else res.relay_slope.slope,
        }
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            csv_path.write_text(curve.to_csv())
            man_path.write_text(json.dumps(manifest, indent=2) + "\n")
        except OSError as exc:
            raise OSError(f"cannot write results to {out_dir}: {exc}") from exc
        res.files = {"csv": csv_path, "manifest": man_path}
    return res
