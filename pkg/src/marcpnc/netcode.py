"""Latin hypercube network-coding maps used at the relay.

A map ``f: S^K -> S`` is stored as a dense ``K``-dimensional array of
symbol labels, indexed ``entries[x_1, ..., x_K]`` with labels ``0..M-1``.
Row-major flattening of that array gives the relay symbol for each
candidate tuple in lexicographic order, which is the layout the decoding
kernels consume.
"""

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["LatinHypercube", "Violation", "modular_sum_hypercube",
           "validate_hypercube", "evaluate", "load_hypercube"]


@dataclass(frozen=True, eq=False)
class LatinHypercube:
    """Relay map of order ``M`` and dimension ``K``.

    Construction does not check the Latin property so that invalid maps
    can be represented and audited; use :func:`validate_hypercube`.
    """

    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.int64)
        if e.ndim < 1 or len(set(e.shape)) != 1:
            raise ValueError(f"entries must be an M x ... x M array, got {e.shape}")
        m = e.shape[0]
        if np.any((e < 0) | (e >= m)):
            raise ValueError(f"entries must lie in 0..{m - 1}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def order(self):
        return self.entries.shape[0]

    @property
    def dimension(self):
        return self.entries.ndim

    @property
    def flat(self):
        """Relay label per candidate tuple, lexicographic order."""
        return self.entries.reshape(-1)

    def __call__(self, *labels):
        return evaluate(self, labels)

    def __eq__(self, other):
        if not isinstance(other, LatinHypercube):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def permuted(self, axes):
        """Same map with the source axes reordered (``np.transpose`` semantics)."""
        return LatinHypercube(np.transpose(self.entries, axes))

    def to_text(self):
        head = f"{self.order} {self.dimension}\n"
        return head + " ".join(str(v) for v in self.flat) + "\n"

    @classmethod
    def from_text(cls, text):
        """Parse ``"M K"`` followed by ``M**K`` row-major labels; validates."""
        tokens = text.split()
        if len(tokens) < 2:
            raise ValueError("hypercube text is missing the 'M K' header")
        m, k = int(tokens[0]), int(tokens[1])
        body = tokens[2:]
        if len(body) != m ** k:
            raise ValueError(f"expected {m ** k} entries for M={m}, K={k}, got {len(body)}")
        cube = cls(np.array([int(t) for t in body]).reshape((m,) * k))
        bad = validate_hypercube(cube)
        if bad is not None:
            raise ValueError(f"not a Latin hypercube: {bad}")
        return cube


@dataclass(frozen=True)
class Violation:
    """First failure of the Latin property: along ``axis`` (0-based) with the
    remaining coordinates fixed at ``fixed`` (``None`` marks the free axis)."""

    axis: int
    fixed: tuple

    def __str__(self):
        return f"repeated symbol along axis {self.axis} at {self.fixed}"


def modular_sum_hypercube(M, K):
    """Entry at ``(i_1, ..., i_K)`` is ``(i_1 + ... + i_K) mod M``."""
    if M < 2 or K < 2:
        raise ValueError(f"need M >= 2 and K >= 2, got M={M}, K={K}")
    grids = np.indices((M,) * K).sum(axis=0)
    return LatinHypercube(grids % M)


def validate_hypercube(h):
    """Return ``None`` if ``h`` is a Latin hypercube, else the first
    :class:`Violation` in (axis, lexicographic fixing) scan order."""
    m, k = h.order, h.dimension
    full = np.arange(m)
    for axis in range(k):
        lines = np.moveaxis(h.entries, axis, -1).reshape(-1, m)
        ok = np.all(np.sort(lines, axis=1) == full, axis=1)
        if not ok.all():
            first = int(np.argmin(ok))
            rest = list(np.unravel_index(first, (m,) * (k - 1))) if k > 1 else []
            fixed = tuple(int(v) for v in rest)
            fixed = fixed[:axis] + (None,) + fixed[axis:]
            return Violation(axis, fixed)
    return None


def evaluate(h, labels):
    labels = tuple(int(v) for v in labels)
    if len(labels) != h.dimension:
        raise ValueError(f"expected {h.dimension} labels, got {len(labels)}")
    for v in labels:
        if not 0 <= v < h.order:
            raise ValueError(f"label {v} out of range 0..{h.order - 1}")
    return int(h.entries[labels])


def load_hypercube(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read hypercube file {path}: {exc}") from exc
    return LatinHypercube.from_text(text)


def candidate_table(M, K):
    """All ``M**K`` label tuples in lexicographic order, shape ``(M**K, K)``."""
    return np.array(list(itertools.product(range(M), repeat=K)),
                    dtype=np.int64).reshape(M ** K, K)
