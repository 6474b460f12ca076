"""SVD-based rank and kernel decisions.

Every "is this kernel trivial?" question in the package goes through
:func:`has_kernel`, so that one cutoff rule governs all of them: a singular
value ``s`` counts as zero when ``s <= rank_tol * max(rows, cols) * scale``.
``scale`` defaults to the largest singular value of the matrix itself;
callers testing sub-blocks of a larger matrix pass the parent's largest
singular value instead, so that a block which is numerically zero is not
rescaled into looking full rank.
"""

from __future__ import annotations

import numpy as np


def spectral_norm(M: np.ndarray) -> float:
    M = np.atleast_2d(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])


def _cutoff(shape: tuple[int, int], smax: float, rank_tol: float) -> float:
    return rank_tol * max(shape) * smax


def numerical_rank(M: np.ndarray, rank_tol: float, scale: float | None = None) -> int:
    M = np.atleast_2d(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    smax = s[0] if scale is None else scale
    return int(np.count_nonzero(s > _cutoff(M.shape, smax, rank_tol)))


def has_kernel(M: np.ndarray, rank_tol: float, scale: float | None = None) -> bool:
    """True when ``M`` has a nonzero right kernel vector under the cutoff."""
    M = np.atleast_2d(M)
    rows, cols = M.shape
    if cols == 0:
        return False
    if rows < cols:
        return True
    return numerical_rank(M, rank_tol, scale) < cols


def null_space(M: np.ndarray, rank_tol: float, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical right kernel of ``M``."""
    M = np.atleast_2d(M)
    rows, cols = M.shape
    if rows == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(M)
    smax = s[0] if scale is None else scale
    r = int(np.count_nonzero(s > _cutoff(M.shape, smax, rank_tol)))
    return vh[r:].conj().T


def left_null_space(M: np.ndarray, rank_tol: float) -> np.ndarray:
    """Orthonormal basis (as rows) of ``{h : h M = 0}``."""
    return null_space(np.atleast_2d(M).conj().T, rank_tol).conj().T
