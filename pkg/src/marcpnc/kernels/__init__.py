"""Hot decoding kernels with two interchangeable backends.

``numba`` (default when importable) runs compiled per-trial loops;
``numpy`` runs batch-vectorised array code. Select with the environment
variable ``MARCPNC_BACKEND=numpy|numba`` before import, or at runtime
with :func:`set_backend`. Both backends share one calling convention and
the same lexicographic tie-break.
"""

import os

from . import _numpy

__all__ = ["get_backend", "set_backend", "available_backends"]

ENV_FLAG = "MARCPNC_BACKEND"

try:
    from . import _numba
except ImportError:  # pragma: no cover - numba missing
    _numba = None

_BACKENDS = {"numpy": _numpy}
if _numba is not None:
    _BACKENDS["numba"] = _numba


def available_backends():
    return tuple(_BACKENDS)


def _initial():
    want = os.environ.get(ENV_FLAG, "").strip().lower()
    if want:
        if want not in _BACKENDS:
            raise RuntimeError(
                f"{ENV_FLAG}={want!r} not available; choose from {sorted(_BACKENDS)}")
        return _BACKENDS[want]
    return _BACKENDS.get("numba", _numpy)


_active = _initial()


def get_backend(name=None):
    if name is None:
        return _active
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; have {sorted(_BACKENDS)}") from None


def set_backend(name):
    global _active
    _active = get_backend(name)
    return _active
