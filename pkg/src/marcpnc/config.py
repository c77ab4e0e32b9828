"""Experiment configuration files.

An INI-style key-value file (``configparser``)::

    [scheme]
    K = 3
    M = 4
    # "example" (literal K=3/K=4 designs), "vset: theta,phi[,form]; ...",
    # or a path to a coefficient file (K lines "Re(a) Im(a) Re(b) Im(b)")
    coefficients = example
    # "modular" or a path to a hypercube file ("M K" then M**K labels)
    hypercube = modular

    [channel]
    # dB; one value for all sources or a comma-separated list of K values
    sigma2_sr_db = 0
    sigma2_sd_db = 0
    sigma2_rd_db = 0

    [sweep]
    snr_grid_db = 15, 20, 25, 30
    decoder = novel_fast          # naive | novel_exhaustive | novel_fast
    min_trials = 1000
    max_trials = 2000000
    target_errors = 100
    seed = 1

Relative paths are resolved against the config file's directory.
Everything except ``[scheme] K`` has a default.
"""

import configparser
from pathlib import Path

from .codebook import CoefficientSet, example_coefficients, v_set_coefficients
from .mc_sim import ExperimentSpec, SchemeConfig
from .netcode import load_hypercube, modular_sum_hypercube
from .signal import make_psk

__all__ = ["load_config", "parse_config", "scheme_from_section"]


def _floats(text):
    return [float(t) for t in text.replace(",", " ").split()]


def _coefficients(value, K, base):
    value = value.strip()
    if value == "example":
        return example_coefficients(K)
    if value.startswith("vset:"):
        params = [tuple(_floats(p)) for p in value[5:].split(";") if p.strip()]
        return v_set_coefficients(K, params)
    c = CoefficientSet.load(base / value)
    if c.K != K:
        raise ValueError(f"coefficient file has {c.K} sources, config says K={K}")
    return c


def scheme_from_section(sec, base=Path(".")):
    K = sec.getint("K")
    if K is None:
        raise ValueError("[scheme] needs K")
    M = sec.getint("M", 4)
    cube_src = sec.get("hypercube", "modular").strip()
    cube = (modular_sum_hypercube(M, K) if cube_src == "modular"
            else load_hypercube(base / cube_src))
    coeffs = _coefficients(sec.get("coefficients", "example"), K, base)
    return SchemeConfig(make_psk(M), coeffs, cube)


def parse_config(text, base=Path("."), seed=None):
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string(text)
    if not cp.has_section("scheme"):
        raise ValueError("config lacks a [scheme] section")
    scheme = scheme_from_section(cp["scheme"], base)
    ch = cp["channel"] if cp.has_section("channel") else {}
    sw = cp["sweep"] if cp.has_section("sweep") else {}

    def db(key):
        vals = _floats(ch.get(key, "0"))
        return vals[0] if len(vals) == 1 else vals

    return ExperimentSpec(
        scheme=scheme,
        snr_grid_db=tuple(_floats(sw.get("snr_grid_db", "15, 20, 25, 30"))),
        decoder=sw.get("decoder", "novel_fast").strip(),
        sigma2_SR_db=db("sigma2_sr_db"),
        sigma2_SD_db=db("sigma2_sd_db"),
        sigma2_RD_db=float(_floats(ch.get("sigma2_rd_db", "0"))[0]),
        min_trials=int(sw.get("min_trials", 1000)),
        max_trials=int(sw.get("max_trials", 2_000_000)),
        target_errors=int(sw.get("target_errors", 100)),
        seed=int(seed if seed is not None else sw.get("seed", 0)),
    )


def load_config(path, seed=None):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, path.parent, seed)
