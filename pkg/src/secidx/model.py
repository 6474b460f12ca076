"""Systems, trajectories and attack signals.

Sensor indices are 1-based everywhere they cross the public API: a support
is a ``frozenset`` of integers in ``{1, ..., N}``. Arrays are stored as
read-only complex ``numpy`` arrays, row ``i - 1`` belonging to sensor ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from secidx.errors import DimensionMismatch, NotObservable
from secidx.linalg import numerical_rank


def as_complex_array(x, ndim: int, name: str) -> np.ndarray:
    """Copy ``x`` into a read-only complex array with ``ndim`` dimensions."""
    arr = np.array(x, dtype=complex)
    if arr.ndim != ndim:
        raise DimensionMismatch(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical cutoffs.

    rank_tol
        Relative singular-value cutoff used in every rank/kernel decision.
    residual_tol
        Consistency threshold for least-squares fits and ``HG = 0`` checks.
    detect_tol
        Threshold below which a sample or syndrome counts as zero.
    """

    rank_tol: float = 1e-10
    residual_tol: float = 1e-8
    detect_tol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "detect_tol"):
            value = getattr(self, name)
            if not value >= 0:
                raise ValueError(f"{name} must be nonnegative, got {value!r}")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class SystemModel:
    """Autonomous LTI system ``x(t+1) = A x(t)``, ``y(t) = C x(t)``.

    Build instances with :func:`make_system`, which validates shapes and
    observability.
    """

    A: np.ndarray
    C: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def N(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class Trajectory:
    """Finite window of a multi-sensor signal, shape ``(N, T)``."""

    samples: np.ndarray

    def __post_init__(self):
        arr = as_complex_array(self.samples, 2, "samples")
        if arr.shape[1] < 1:
            raise DimensionMismatch("a trajectory needs at least one time step")
        object.__setattr__(self, "samples", arr)

    @property
    def N(self) -> int:
        return self.samples.shape[0]

    @property
    def T(self) -> int:
        return self.samples.shape[1]

    def __sub__(self, other: "Trajectory") -> "Trajectory":
        if self.samples.shape != other.samples.shape:
            raise DimensionMismatch(f"{self.samples.shape} vs {other.samples.shape}")
        return Trajectory(self.samples - other.samples)

    def __add__(self, other: "Trajectory") -> "Trajectory":
        if self.samples.shape != other.samples.shape:
            raise DimensionMismatch(f"{self.samples.shape} vs {other.samples.shape}")
        return Trajectory(self.samples + other.samples)


@dataclass(frozen=True)
class AttackSignal:
    """Additive sensor attack. ``support`` holds the rows that are not
    identically zero (exact test, no threshold)."""

    samples: np.ndarray
    support: frozenset = field(init=False)

    def __post_init__(self):
        arr = as_complex_array(self.samples, 2, "samples")
        object.__setattr__(self, "samples", arr)
        rows = np.flatnonzero(np.any(arr != 0, axis=1))
        object.__setattr__(self, "support", frozenset(int(i) + 1 for i in rows))

    @property
    def N(self) -> int:
        return self.samples.shape[0]

    @property
    def T(self) -> int:
        return self.samples.shape[1]

    @property
    def weight(self) -> int:
        return len(self.support)

    def as_trajectory(self) -> Trajectory:
        return Trajectory(self.samples)


def make_system(A, C, tol: ToleranceConfig = DEFAULT_TOL) -> SystemModel:
    """Validate ``(A, C)`` and return a :class:`SystemModel`.

    Raises
    ------
    DimensionMismatch
        ``A`` not square, or ``C`` column count differs from ``A``'s size.
    NotObservable
        The coding matrix has numerical rank below ``n``.
    """
    from secidx.coding import coding_blocks

    A = as_complex_array(A, 2, "A")
    C = as_complex_array(C, 2, "C")
    n = A.shape[0]
    if n == 0 or A.shape != (n, n):
        raise DimensionMismatch(f"A must be square and nonempty, got shape {A.shape}")
    if C.shape[1] != n or C.shape[0] < 1:
        raise DimensionMismatch(f"C must have shape (N, {n}) with N >= 1, got {C.shape}")
    G = coding_blocks(A, C).reshape(-1, n)
    rank = numerical_rank(G, tol.rank_tol)
    if rank < n:
        raise NotObservable(f"coding matrix has rank {rank} < n = {n}")
    return SystemModel(A, C)


def _row_peaks(traj: Trajectory) -> np.ndarray:
    return np.max(np.abs(traj.samples), axis=1)


def support(traj: Trajectory, tol: ToleranceConfig = DEFAULT_TOL) -> frozenset:
    """1-based indices of rows whose peak magnitude exceeds ``detect_tol``."""
    peaks = _row_peaks(traj)
    return frozenset(int(i) + 1 for i in np.flatnonzero(peaks > tol.detect_tol))


def weight(traj: Trajectory, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Number of sensor rows that are not (numerically) the zero signal."""
    return len(support(traj, tol))
