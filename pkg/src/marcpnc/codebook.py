"""Superposition coefficients, weight/codeword matrices and scheme audits.

Source indices are 0-based throughout: source ``i`` is ``S_{i+1}``.
"""

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["CoefficientSet", "RankCheck", "example_coefficients",
           "v_set_coefficients", "weight_matrix", "relay_weight_matrix",
           "restricted_codeword_diff_matrix", "build_codeword_matrix",
           "rank_condition_check", "hr_orthogonality_check",
           "hr_orthogonal_direct", "hr_pivot"]

DET_TOL = 1e-9
HR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    """Phase-1 weights ``a`` and phase-2 weights ``b``, one pair per source,
    each pair with ``|a_i|**2 + |b_i|**2 == 1``."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=np.complex128).reshape(-1)
        b = np.array(self.b, dtype=np.complex128).reshape(-1)
        if a.size != b.size or a.size == 0:
            raise ValueError("a and b must be nonempty and of equal length")
        energy = np.abs(a) ** 2 + np.abs(b) ** 2
        bad = np.flatnonzero(np.abs(energy - 1.0) > 1e-9)
        if bad.size:
            i = int(bad[0])
            raise ValueError(f"|a_{i}|^2 + |b_{i}|^2 = {energy[i]!r}, expected 1")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def K(self):
        return self.a.size

    def permuted(self, order):
        order = list(order)
        return CoefficientSet(self.a[order], self.b[order])

    def to_text(self):
        return "".join(f"{float(ai.real)!r} {float(ai.imag)!r} {float(bi.real)!r} {float(bi.imag)!r}\n"
                       for ai, bi in zip(self.a, self.b))

    @classmethod
    def from_text(cls, text):
        rows = [line.split() for line in text.splitlines()
                if line.strip() and not line.lstrip().startswith("#")]
        if any(len(r) != 4 for r in rows):
            raise ValueError("each coefficient line needs 4 numbers: Re(a) Im(a) Re(b) Im(b)")
        vals = np.array(rows, dtype=float).reshape(-1, 4)
        return cls(vals[:, 0] + 1j * vals[:, 1], vals[:, 2] + 1j * vals[:, 3])

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            return cls.from_text(path.read_text())
        except OSError as exc:
            raise OSError(f"cannot read coefficient file {path}: {exc}") from exc


def example_coefficients(K):
    """The literal 3-user and 4-user coefficient designs."""
    r = 1 / np.sqrt(2)
    if K == 3:
        return CoefficientSet([1, r, r], [0, r, -r])
    if K == 4:
        return CoefficientSet([1, r, r, 1j * r], [0, r, -r, r])
    raise ValueError(f"no literal coefficient example for K={K}; use v_set_coefficients")


def v_set_coefficients(K, params):
    """Coefficients with ``[a_1, b_1] = [1, 0]`` and the rest drawn from
    ``V = {[cos t e^{jp}, sin t], [-sin t, cos t e^{-jp}]}``.

    Parameters
    ----------
    K : int
        Number of sources, at least 2.
    params : sequence
        ``K - 1`` entries ``(theta, phi)`` or ``(theta, phi, form)``, where
        ``form`` 0 picks the first vector of ``V`` and 1 the second.

    Raises
    ------
    ValueError
        On a wrong parameter count, out-of-range angles, or two rows that are
        equal or collinear (collinear rows break the rank condition).
    """
    if K < 2:
        raise ValueError(f"need K >= 2, got {K}")
    params = list(params)
    if len(params) != K - 1:
        raise ValueError(f"need {K - 1} parameter pairs, got {len(params)}")
    a, b = [1.0 + 0j], [0.0 + 0j]
    for p in params:
        theta, phi = float(p[0]), float(p[1])
        form = int(p[2]) if len(p) > 2 else 0
        if not 0 < theta < np.pi / 2:
            raise ValueError(f"theta={theta} outside (0, pi/2)")
        if not -np.pi <= phi < np.pi:
            raise ValueError(f"phi={phi} outside [-pi, pi)")
        if form == 0:
            a.append(np.cos(theta) * np.exp(1j * phi))
            b.append(np.sin(theta) + 0j)
        elif form == 1:
            a.append(-np.sin(theta) + 0j)
            b.append(np.cos(theta) * np.exp(-1j * phi))
        else:
            raise ValueError(f"form must be 0 or 1, got {form}")
    c = CoefficientSet(a, b)
    for i, j in itertools.combinations(range(K), 2):
        if abs(c.a[i] * c.b[j] - c.a[j] * c.b[i]) <= DET_TOL:
            raise ValueError(f"duplicate (collinear) vectors for sources {i} and {j}")
    return c


def weight_matrix(c, i):
    """``(K+1) x 2`` matrix whose only nonzero row ``i`` is ``[a_i, b_i]``."""
    w = np.zeros((c.K + 1, 2), dtype=np.complex128)
    w[i] = c.a[i], c.b[i]
    return w


def relay_weight_matrix(K):
    w = np.zeros((K + 1, 2), dtype=np.complex128)
    w[K] = 0, 1
    return w


def restricted_codeword_diff_matrix(dx, c):
    """``K x 2`` matrix with row ``i`` equal to ``[a_i dx_i, b_i dx_i]``."""
    dx = np.asarray(dx, dtype=np.complex128)
    return np.stack([c.a * dx, c.b * dx], axis=1)


def build_codeword_matrix(x, x_R, c):
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.size != c.K:
        raise ValueError(f"expected {c.K} symbols, got {x.size}")
    out = np.zeros((c.K + 1, 2), dtype=np.complex128)
    out[:-1] = restricted_codeword_diff_matrix(x, c)
    out[-1, 1] = x_R
    return out


@dataclass(frozen=True)
class RankCheck:
    """Outcome of :func:`rank_condition_check`.

    ``pair`` and ``witness`` describe the first failing row pair; the
    witness is ``(dx_i, dx_j)`` for the exhaustive mode and the scalar
    ``a_i b_j - a_j b_i`` for the algebraic one.
    """

    passed: bool
    pair: tuple = None
    witness: object = None

    def __bool__(self):
        return self.passed


def rank_condition_check(c, ds, mode="algebraic"):
    """Check that every 2x2 submatrix of every restricted codeword difference
    matrix with nonzero differences has rank two.

    ``mode="exhaustive"`` scans all nonzero difference pairs; the default
    ``"algebraic"`` mode uses ``det = dx_i dx_j (a_i b_j - a_j b_i)``.
    """
    if c.K < 2:
        raise ValueError("rank condition needs K >= 2")
    if mode == "algebraic":
        for i, j in itertools.combinations(range(c.K), 2):
            det = c.a[i] * c.b[j] - c.a[j] * c.b[i]
            if abs(det) <= DET_TOL:
                return RankCheck(False, (i, j), complex(det))
        return RankCheck(True)
    if mode == "exhaustive":
        nz = ds.nonzero()
        for i, j in itertools.combinations(range(c.K), 2):
            for dxi in nz:
                for dxj in nz:
                    sub = np.array([[c.a[i] * dxi, c.b[i] * dxi],
                                    [c.a[j] * dxj, c.b[j] * dxj]])
                    if abs(np.linalg.det(sub)) <= DET_TOL:
                        return RankCheck(False, (i, j), (complex(dxi), complex(dxj)))
        return RankCheck(True)
    raise ValueError(f"unknown mode {mode!r}")


def hr_orthogonal_direct(c, i):
    """Evaluate ``W_i W_R^* + W_R W_i^*`` and test it against zero."""
    _check_index(c, i)
    wi, wr = weight_matrix(c, i), relay_weight_matrix(c.K)
    s = wi @ wr.conj().T + wr @ wi.conj().T
    return bool(np.all(np.abs(s) <= HR_TOL))


def hr_orthogonality_check(c, i):
    """Whether ``W_i`` and ``W_R`` are Hurwitz-Radon orthogonal.

    The sum ``W_i W_R^* + W_R W_i^*`` has nonzero entries only at
    ``(i, K)`` = ``b_i`` and ``(K, i)`` = ``conj(b_i)``, so the test
    reduces to ``b_i == 0``.
    """
    _check_index(c, i)
    return bool(abs(c.b[i]) <= HR_TOL)


def hr_pivot(c):
    """First source index H-R orthogonal with the relay, or ``None``."""
    for i in range(c.K):
        if hr_orthogonality_check(c, i):
            return i
    return None


def _check_index(c, i):
    if not 0 <= i < c.K:
        raise IndexError(f"source index {i} out of range 0..{c.K - 1}")
