"""Constellations, bit labelling and difference sets."""

from dataclasses import dataclass

import numpy as np

__all__ = ["SignalSet", "DifferenceSet", "make_psk", "map_bits", "demap",
           "difference_set"]

_DEDUP_TOL = 1e-12


def _is_power_of_two(m):
    return isinstance(m, (int, np.integer)) and m >= 2 and (m & (m - 1)) == 0


@dataclass(frozen=True, eq=False)
class SignalSet:
    """An ``M = 2**bits_per_symbol`` point unit-energy constellation.

    The position of a point in ``points`` is its symbol label; labels are
    also the indices of the relay's Latin hypercube.
    """

    points: np.ndarray
    bits_per_symbol: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128).reshape(-1)
        m = pts.size
        if not _is_power_of_two(m):
            raise ValueError(f"invalid M={m}: must be a power of 2, >= 2")
        if 2 ** self.bits_per_symbol != m:
            raise ValueError(
                f"bits_per_symbol={self.bits_per_symbol} inconsistent with M={m}")
        energy = np.mean(np.abs(pts) ** 2)
        if abs(energy - 1.0) > 1e-12:
            raise ValueError(f"mean symbol energy {energy!r} != 1")
        gaps = np.abs(pts[:, None] - pts[None, :]) + np.eye(m)
        if np.any(gaps <= _DEDUP_TOL):
            raise ValueError("constellation points must be distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def order(self):
        return self.points.size

    def __len__(self):
        return self.points.size

    def __getitem__(self, label):
        return self.points[label]


@dataclass(frozen=True, eq=False)
class DifferenceSet:
    """All distinct values ``x - x'`` for ``x, x'`` in a constellation."""

    values: np.ndarray

    def nonzero(self):
        return self.values[np.abs(self.values) > _DEDUP_TOL]

    def __contains__(self, z):
        return bool(np.any(np.abs(self.values - z) <= _DEDUP_TOL))

    def __len__(self):
        return self.values.size


def make_psk(M):
    """M-PSK with point ``k`` at ``exp(2j*pi*k/M)``.

    Raises
    ------
    ValueError
        If ``M`` is not a power of two or is smaller than 2.
    """
    if not _is_power_of_two(M):
        raise ValueError(f"invalid M={M}: must be a power of 2, >= 2")
    k = np.arange(M)
    pts = np.exp(2j * np.pi * k / M)
    # exact values on the axes so that e.g. 4-PSK is exactly [1, j, -1, -j]
    pts.real[np.abs(pts.real) < 1e-15] = 0.0
    pts.imag[np.abs(pts.imag) < 1e-15] = 0.0
    return SignalSet(pts, int(M).bit_length() - 1)


def map_bits(bits, bits_per_symbol):
    """Natural binary label of a bit vector, most significant bit first."""
    bits = np.asarray(bits).reshape(-1)
    if bits.size != bits_per_symbol:
        raise ValueError(f"expected {bits_per_symbol} bits, got {bits.size}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError(f"not a bit vector: {bits!r}")
    label = 0
    for b in bits:
        label = (label << 1) | int(b)
    return label


def demap(label, bits_per_symbol):
    """Inverse of :func:`map_bits`."""
    if not 0 <= label < 2 ** bits_per_symbol:
        raise ValueError(f"label {label} out of range for {bits_per_symbol} bits")
    return np.array([(label >> (bits_per_symbol - 1 - i)) & 1
                     for i in range(bits_per_symbol)], dtype=np.int64)


def difference_set(ss):
    diffs = (ss.points[:, None] - ss.points[None, :]).reshape(-1)
    kept = []
    for d in diffs:
        if all(abs(d - k) > _DEDUP_TOL for k in kept):
            kept.append(d)
    vals = np.array(kept, dtype=np.complex128)
    vals.setflags(write=False)
    return DifferenceSet(vals)
