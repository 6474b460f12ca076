"""Coding matrix G, its sensor blocks, and a check matrix H with HG = 0."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from secidx.errors import EmptySubset, IndexOutOfRange, WindowOutOfRange
from secidx.linalg import left_null_space, spectral_norm
from secidx.model import DEFAULT_TOL, SystemModel, ToleranceConfig, Trajectory


def coding_blocks(A: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Return an ``(N, n, n)`` array whose ``[i, k]`` row is ``C_i A^k``."""
    n = A.shape[0]
    N = C.shape[0]
    blocks = np.empty((N, n, n), dtype=complex)
    rows = np.array(C, dtype=complex)
    for k in range(n):
        blocks[:, k, :] = rows
        rows = rows @ A
    return blocks


@dataclass(frozen=True)
class CodingMatrix:
    blocks: np.ndarray  # (N, n, n)

    @property
    def N(self) -> int:
        return self.blocks.shape[0]

    @property
    def n(self) -> int:
        return self.blocks.shape[2]

    @property
    def G(self) -> np.ndarray:
        return self.blocks.reshape(-1, self.n)

    @property
    def scale(self) -> float:
        """Largest singular value of G; the reference for block rank tests."""
        return spectral_norm(self.G)

    def block(self, i: int) -> np.ndarray:
        """Block ``G_i`` for 1-based sensor index ``i``."""
        return self.blocks[i - 1]


@dataclass(frozen=True)
class CheckMatrix:
    H: np.ndarray  # (n(N-1), nN)
    n: int
    N: int

    @property
    def blocks(self) -> list[np.ndarray]:
        return [self.H[:, i * self.n:(i + 1) * self.n] for i in range(self.N)]

    def columns(self, J: Iterable[int]) -> np.ndarray:
        """Juxtapose the blocks ``H_i`` for 1-based ``i`` in ``J`` (ascending)."""
        cols = [c for i in sorted(J) for c in range((i - 1) * self.n, i * self.n)]
        return self.H[:, cols]


def build_coding_matrix(sys: SystemModel) -> CodingMatrix:
    return CodingMatrix(coding_blocks(sys.A, sys.C))


def _check_subset(J: Iterable[int], N: int) -> list[int]:
    J = sorted(set(J))
    if not J:
        raise EmptySubset("sensor subset must be nonempty")
    bad = [i for i in J if not 1 <= i <= N]
    if bad:
        raise IndexOutOfRange(f"sensor indices {bad} outside 1..{N}")
    return J


def stack_subset(cm: CodingMatrix, J: Iterable[int]) -> np.ndarray:
    """Vertical stack of ``G_i`` for ``i`` in ``J``, ascending, shape ``(|J| n, n)``."""
    J = _check_subset(J, cm.N)
    return cm.blocks[[i - 1 for i in J]].reshape(-1, cm.n)


def build_check_matrix(cm: CodingMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> CheckMatrix:
    """Orthonormal left annihilator of G.

    For ``N = 1`` the result is the degenerate ``0 x n`` matrix.
    """
    H = left_null_space(cm.G, tol.rank_tol)
    expected = cm.n * (cm.N - 1)
    if H.shape[0] != expected:
        # only reachable if G lost rank after make_system accepted it
        raise ValueError(f"left null space has dimension {H.shape[0]}, expected {expected}")
    return CheckMatrix(H, cm.n, cm.N)


def window_vector(traj: Trajectory, t: int, n: int) -> np.ndarray:
    """Stack ``traj[i, t:t+n]`` sensor by sensor; equals ``G x(t)`` when clean."""
    if t < 0 or t + n > traj.T:
        raise WindowOutOfRange(f"window [{t}, {t + n}) outside horizon T = {traj.T}")
    return traj.samples[:, t:t + n].reshape(-1)


def all_windows(traj: Trajectory, n: int) -> np.ndarray:
    """Columns are ``window_vector(traj, t, n)`` for ``t = 0 .. T - n``."""
    if traj.T < n:
        raise WindowOutOfRange(f"horizon T = {traj.T} shorter than window n = {n}")
    return np.stack([window_vector(traj, t, n) for t in range(traj.T - n + 1)], axis=1)
