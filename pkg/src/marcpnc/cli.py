"""Command line: ``marcpnc audit|sweep|slope``."""

import argparse
import logging
import sys
from pathlib import Path

from .codebook import hr_orthogonality_check, rank_condition_check
from .config import load_config
from .mc_sim import (InsufficientPointsError, SepCurve, default_workers,
                     fit_diversity_slope, run_experiment)
from .netcode import validate_hypercube
from .signal import difference_set


def audit(spec, out=None):
    """Print the scheme checks; return True if the scheme passes.

    The H-R check only gates the result when the configured decoder is
    ``novel_fast``, which cannot run without an H-R orthogonal source.
    """
    out = out or sys.stdout
    sch = spec.scheme
    ok = True
    bad = validate_hypercube(sch.hypercube)
    print(f"latin hypercube (M={sch.M}, K={sch.K}): "
          + ("PASS" if bad is None else f"FAIL ({bad})"), file=out)
    ok &= bad is None
    ds = difference_set(sch.signal_set)
    for mode in ("algebraic", "exhaustive"):
        r = rank_condition_check(sch.coefficients, ds, mode)
        msg = "PASS" if r else f"FAIL (sources {r.pair}, witness {r.witness})"
        print(f"rank condition [{mode}]: {msg}", file=out)
        ok &= r.passed
    hr = [hr_orthogonality_check(sch.coefficients, i) for i in range(sch.K)]
    for i, h in enumerate(hr):
        print(f"H-R orthogonal W_{i} vs W_R: {'yes' if h else 'no'}", file=out)
    if spec.decoder == "novel_fast" and not any(hr):
        print("fast decoding: FAIL (no H-R orthogonal source)", file=out)
        ok = False
    print("audit: " + ("PASS" if ok else "FAIL"), file=out)
    return ok


def _cmd_audit(args):
    return 0 if audit(load_config(args.config)) else 1


def _cmd_sweep(args):
    spec = load_config(args.config, seed=args.seed)
    workers = args.workers or default_workers()
    res = run_experiment(spec, args.out, workers=workers, slope_window=args.window)
    sys.stdout.write(res.curve.to_csv())
    if res.slope is not None:
        print(f"# diversity slope {res.slope.slope:.3f} over points {list(res.slope.fit_points)}")
    if res.relay_slope is not None:
        print(f"# relay map-symbol error slope {res.relay_slope.slope:.3f}")
    print(f"# wrote {res.files['csv']} and {res.files['manifest']}")
    return 0


def _cmd_slope(args):
    path = Path(args.csv)
    try:
        curve = SepCurve.from_csv(path.read_text(), args.target_errors)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return 2
    try:
        est = fit_diversity_slope(curve, args.window, args.metric)
    except InsufficientPointsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"slope {est.slope:.6f} residual {est.residual:.3g} points {list(est.fit_points)}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="marcpnc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("audit", help="check hypercube, rank and H-R conditions")
    a.add_argument("config")
    a.set_defaults(func=_cmd_audit)

    s = sub.add_parser("sweep", help="run an SNR sweep, write curve.csv + manifest.json")
    s.add_argument("config")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--workers", type=int, default=None,
                   help="worker threads (default: $MARCPNC_WORKERS or CPU count)")
    s.add_argument("--window", type=int, default=None,
                   help="fit the slope on the last N qualifying points")
    s.set_defaults(func=_cmd_sweep)

    f = sub.add_parser("slope", help="fit the diversity slope of a stored curve")
    f.add_argument("csv")
    f.add_argument("--window", type=int, default=None)
    f.add_argument("--target-errors", type=int, default=100)
    f.add_argument("--metric", choices=("sep", "relay_map_error_rate"), default="sep")
    f.set_defaults(func=_cmd_slope)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
