"""Polynomial matrices for kernel representations ``R(sigma) y = 0``.

Polynomials are 1-D complex coefficient arrays in ascending degree order.
A :class:`PolyMatrix` stores its coefficient matrices stacked as
``coeffs[k]`` (the ``p x q`` coefficient of ``xi**k``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable

import numpy as np

from secidx.errors import DimensionMismatch, HorizonTooShort, InvalidKernelRep, NotSquare, WideMatrix
from secidx.linalg import has_kernel
from secidx.model import DEFAULT_TOL, ToleranceConfig, Trajectory

TRIM_TOL = 1e-10
ROOT_CLUSTER_TOL = 1e-3
GCD_TOL = 1e-8


def poly_trim(c, tol: float = TRIM_TOL, scale: float | None = None) -> np.ndarray:
    """Drop leading coefficients with ``|c_k| <= tol * scale``.

    ``scale`` defaults to the largest coefficient magnitude. The zero
    polynomial comes back as ``[0]``.
    """
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if scale is None:
        scale = np.max(np.abs(c)) if c.size else 0.0
    keep = np.flatnonzero(np.abs(c) > tol * scale)
    if keep.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: keep[-1] + 1].copy()


def poly_degree(c) -> int:
    """Degree of a trimmed polynomial; -1 for the zero polynomial."""
    c = np.asarray(c)
    if c.size == 1 and c[0] == 0:
        return -1
    return c.size - 1


def poly_eval(c, x: complex) -> complex:
    return complex(np.polynomial.polynomial.polyval(x, c))


def poly_roots(c) -> np.ndarray:
    """Roots via companion-matrix eigenvalues."""
    c = poly_trim(c)
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c[::-1]).astype(complex)


def _monic(c: np.ndarray) -> np.ndarray:
    return c / c[-1] if poly_degree(c) >= 0 else c


def poly_gcd(a, b, tol: float = GCD_TOL) -> np.ndarray:
    """Monic greatest common divisor by the Euclidean algorithm.

    A remainder is treated as zero when its coefficients fall below ``tol``
    times the size of the (monic) dividend and divisor. Returns ``[0]`` when
    both inputs vanish.
    """
    a = _monic(poly_trim(a))
    b = _monic(poly_trim(b))
    if poly_degree(a) < poly_degree(b):
        a, b = b, a
    while poly_degree(b) >= 0:
        _, r = np.polynomial.polynomial.polydiv(a, b)
        r = poly_trim(r, tol, max(np.max(np.abs(a)), np.max(np.abs(b))))
        a, b = b, _monic(r)
    return a


def _candidate_centres(roots: np.ndarray, radius: float = ROOT_CLUSTER_TOL) -> list[complex]:
    """Means of groups of roots lying within ``radius`` (relative) of each other."""
    means = []
    used = np.zeros(len(roots), dtype=bool)
    for i in range(len(roots)):
        if used[i]:
            continue
        near = np.abs(roots - roots[i]) <= radius * (1 + abs(roots[i]))
        near &= ~used
        used |= near
        if near.sum() > 1:
            means.append(complex(np.mean(roots[near])))
    return means


def common_roots(polys: Iterable, tol: float = GCD_TOL) -> list[complex]:
    """Roots of the first nonzero polynomial at which every polynomial vanishes.

    Centres of tight root clusters are tried as well, since a multiple root
    comes back from the eigenvalue solver as a spread-out cluster.
    """
    polys = [poly_trim(p) for p in polys]
    nonzero = [p for p in polys if poly_degree(p) >= 0]
    if not nonzero:
        return []
    out = []
    roots = poly_roots(nonzero[0])
    for lam in list(roots) + _candidate_centres(roots):
        ok = True
        for p in nonzero:
            size = np.sum(np.abs(p) * np.abs(lam) ** np.arange(p.size))
            if abs(poly_eval(p, lam)) > tol * size:
                ok = False
                break
        if ok:
            out.append(complex(lam))
    return out


@dataclass(frozen=True)
class PolyMatrix:
    coeffs: np.ndarray  # (d + 1, p, q)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[0] < 1:
            raise DimensionMismatch(f"coefficients must have shape (d+1, p, q), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        scale = np.max(np.abs(c)) if c.size else 0.0
        top = [k for k in range(c.shape[0]) if np.max(np.abs(c[k]), initial=0.0) > TRIM_TOL * scale]
        c = c[: (top[-1] + 1 if top else 1)]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_entries(cls, entries) -> "PolyMatrix":
        """Build from a ``p x q`` grid of ascending coefficient lists."""
        p, q = len(entries), len(entries[0])
        d = max(len(cell) for row in entries for cell in row)
        c = np.zeros((d, p, q), dtype=complex)
        for i, row in enumerate(entries):
            if len(row) != q:
                raise DimensionMismatch("ragged polynomial matrix")
            for j, cell in enumerate(row):
                c[: len(cell), i, j] = cell
        return cls(c)

    @classmethod
    def constant(cls, M) -> "PolyMatrix":
        return cls(np.asarray(M, dtype=complex)[None])

    def to_entries(self) -> list:
        from secidx.io import encode_scalar

        return [
            [[encode_scalar(z) for z in self.entry(i, j)] for j in range(self.shape[1])]
            for i in range(self.shape[0])
        ]

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[1], self.coeffs.shape[2]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def entry(self, i: int, j: int) -> np.ndarray:
        """Trimmed coefficient array of the 0-based entry ``(i, j)``."""
        return poly_trim(self.coeffs[:, i, j], scale=np.max(np.abs(self.coeffs)))

    @property
    def entry_degrees(self) -> np.ndarray:
        p, q = self.shape
        return np.array([[poly_degree(self.entry(i, j)) for j in range(q)] for i in range(p)])

    @property
    def row_degrees(self) -> np.ndarray:
        return self.entry_degrees.max(axis=1)

    @property
    def column_degrees(self) -> np.ndarray:
        return self.entry_degrees.max(axis=0)

    def evaluate(self, x: complex) -> np.ndarray:
        powers = x ** np.arange(self.coeffs.shape[0])
        return np.tensordot(powers, self.coeffs, axes=1)

    def columns(self, J: Iterable[int]) -> "PolyMatrix":
        """Sub-matrix of the 1-based columns in ``J`` (ascending)."""
        return PolyMatrix(self.coeffs[:, :, [j - 1 for j in sorted(J)]])

    def left_multiply(self, M) -> "PolyMatrix":
        M = np.asarray(M, dtype=complex)
        return PolyMatrix(np.einsum("ab,kbc->kac", M, self.coeffs))


def poly_det(M: PolyMatrix) -> np.ndarray:
    """Determinant of a square polynomial matrix by Laplace expansion,
    memoised over column subsets."""
    p, q = M.shape
    if p != q:
        raise NotSquare(f"determinant needs a square matrix, got {M.shape}")
    P = np.polynomial.polynomial
    entries = [[M.coeffs[:, i, j] for j in range(q)] for i in range(p)]

    @lru_cache(maxsize=None)
    def minor(cols: tuple) -> np.ndarray:
        k = len(cols)
        if k == 0:
            return np.ones(1, dtype=complex)
        row = k - 1
        acc = np.zeros(1, dtype=complex)
        for pos, j in enumerate(cols):
            sub = minor(cols[:pos] + cols[pos + 1:])
            term = P.polymul(entries[row][j], sub)
            acc = P.polyadd(acc, -term if (k - 1 - pos) % 2 else term)
        return acc

    return minor(tuple(range(q)))


def maximal_minors(M: PolyMatrix) -> list[np.ndarray]:
    """All ``q x q`` minors of a ``p x q`` matrix, rows in lexicographic order."""
    p, q = M.shape
    return [poly_det(PolyMatrix(M.coeffs[:, list(rows), :])) for rows in combinations(range(p), q)]


def _minor_zero_scale(M: PolyMatrix) -> float:
    q = M.shape[1]
    s = float(np.max(np.abs(M.coeffs)))
    return s ** q * factorial(q) * (M.degree + 1) ** q


def minors_gcd(M: PolyMatrix, tol: float = GCD_TOL) -> np.ndarray:
    """Monic GCD of the maximal minors (``[0]`` if they all vanish)."""
    zero = TRIM_TOL * _minor_zero_scale(M)
    g = np.zeros(1, dtype=complex)
    for m in maximal_minors(M):
        if np.max(np.abs(m)) <= zero:
            continue
        m = poly_trim(m)
        g = m / m[-1] if poly_degree(g) < 0 else poly_gcd(g, m, tol)
    return g


def _rank_deficient_at(M: PolyMatrix, lam: complex, tol: ToleranceConfig) -> bool:
    scale = sum(np.linalg.norm(Mk, 2) * abs(lam) ** k for k, Mk in enumerate(M.coeffs))
    return has_kernel(M.evaluate(lam), tol.rank_tol, scale)


def is_left_unimodular(M: PolyMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``M(lam)`` has full column rank for every complex ``lam``.

    Candidate points are the roots of the first maximal minor that is not
    identically zero (plus the centres of tight root clusters, which locate
    multiple roots more accurately than the individual roots do); ``M`` is
    then evaluated at each candidate and rank-tested.
    """
    p, q = M.shape
    if p < q:
        raise WideMatrix(f"a {p}x{q} matrix cannot have a left inverse")
    zero = TRIM_TOL * _minor_zero_scale(M)
    first = None
    for rows in combinations(range(p), q):
        m = poly_det(PolyMatrix(M.coeffs[:, list(rows), :]))
        if np.max(np.abs(m)) > zero:
            first = poly_trim(m)
            break
    if first is None:
        return False
    if poly_degree(first) == 0:
        return True
    roots = poly_roots(first)
    candidates = list(roots) + _candidate_centres(roots)
    return not any(_rank_deficient_at(M, lam, tol) for lam in candidates)


def security_index_from_R(R: PolyMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Smallest column subset of ``R`` that is not left unimodular.

    Raises
    ------
    NotSquare
        ``R`` is not ``N x N``.
    InvalidKernelRep
        ``det R`` vanishes identically, or ``R`` is unimodular (then the
        behaviour it describes contains only the zero trajectory).
    """
    N, q = R.shape
    if N != q:
        raise NotSquare(f"kernel representation must be square, got {R.shape}")
    det = poly_det(R)
    if np.max(np.abs(det)) <= TRIM_TOL * _minor_zero_scale(R):
        raise InvalidKernelRep("det R(xi) is identically zero")
    for L in range(1, N + 1):
        for J in combinations(range(1, N + 1), L):
            if not is_left_unimodular(R.columns(J), tol):
                return L
    raise InvalidKernelRep("R(xi) is unimodular; its behaviour is {0}")


def apply_shift_polynomial(R: PolyMatrix, traj: Trajectory) -> Trajectory:
    """``s(t) = sum_k R_k r(t + k)`` for ``t = 0 .. T - d - 1``."""
    d = R.degree
    if R.shape[1] != traj.N:
        raise DimensionMismatch(f"R has {R.shape[1]} columns, trajectory has {traj.N} sensors")
    if traj.T <= d:
        raise HorizonTooShort(f"horizon T = {traj.T} must exceed deg R = {d}")
    T_out = traj.T - d
    out = np.zeros((R.shape[0], T_out), dtype=complex)
    for k, Rk in enumerate(R.coeffs):
        out += Rk @ traj.samples[:, k:k + T_out]
    return Trajectory(out)
