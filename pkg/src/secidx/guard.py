"""Attack detection by syndromes and attack correction by support search.

Detection: a received signal is attack-free exactly when every length-``n``
window lies in the range of the coding matrix, i.e. ``H Y(t) = 0``; the
kernel-representation variant checks ``R(sigma) r = 0`` instead.

Correction: with security index ``delta``, any attack touching fewer than
``delta / 2`` sensors is uniquely correctable. :func:`correct` tries every
candidate attack support of size ``0, 1, ..., ceil(delta/2) - 1`` in turn and
fits the initial state to the remaining sensors by least squares.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from math import ceil
from typing import Iterable

import numpy as np

from secidx.coding import all_windows, build_check_matrix, build_coding_matrix
from secidx.errors import (
    AmbiguousCorrection,
    DimensionMismatch,
    HorizonTooShort,
    InsufficientObservability,
    NoConsistentSupport,
)
from secidx.index import security_index_subset
from secidx.linalg import numerical_rank
from secidx.model import DEFAULT_TOL, SystemModel, ToleranceConfig, Trajectory
from secidx.polymat import PolyMatrix, apply_shift_polynomial
from secidx.simulate import simulate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DetectionReport:
    """``max_syndrome_norm`` is relative to ``scale`` (the peak magnitude of
    the received signal, or 1 for an all-zero signal), so ``attacked`` is
    exactly ``max_syndrome_norm > detect_tol``."""

    attacked: bool
    max_syndrome_norm: float
    first_flagged_window: int | None
    scale: float = 1.0

    def to_dict(self) -> dict:
        return {
            "attacked": self.attacked,
            "max_syndrome_norm": self.max_syndrome_norm,
            "first_flagged_window": self.first_flagged_window,
        }


@dataclass(frozen=True)
class CorrectionResult:
    x0_estimate: np.ndarray
    attack_support: frozenset
    corrected: Trajectory
    residual: float
    search_size: int

    def to_dict(self) -> dict:
        from secidx.io import encode_vector

        return {
            "x0": encode_vector(self.x0_estimate),
            "support": sorted(self.attack_support),
            "residual": self.residual,
            "search_size": self.search_size,
        }


def _signal_scale(r: Trajectory) -> float:
    peak = float(np.max(np.abs(r.samples)))
    return peak if peak > 0 else 1.0


def _report(norms: np.ndarray, scale: float, tol: ToleranceConfig) -> DetectionReport:
    rel = norms / scale
    flagged = np.flatnonzero(rel > tol.detect_tol)
    peak = float(rel.max()) if rel.size else 0.0
    first = int(flagged[0]) if flagged.size else None
    return DetectionReport(bool(flagged.size), peak, first, scale)


def syndromes_H(sys: SystemModel, r: Trajectory, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Syndrome ``H Y(t)`` for every window, one column per ``t``."""
    if r.N != sys.N:
        raise DimensionMismatch(f"trajectory has {r.N} sensors, system has {sys.N}")
    if r.T < sys.n:
        raise HorizonTooShort(f"horizon T = {r.T} shorter than n = {sys.n}")
    H = build_check_matrix(build_coding_matrix(sys), tol).H
    return H @ all_windows(r, sys.n)


def detect_H(sys: SystemModel, r: Trajectory, tol: ToleranceConfig = DEFAULT_TOL) -> DetectionReport:
    """Flag an attack when some window's syndrome norm exceeds ``detect_tol``
    (relative to the signal's peak magnitude)."""
    S = syndromes_H(sys, r, tol)
    return _report(np.linalg.norm(S, axis=0), _signal_scale(r), tol)


def detect_R(R: PolyMatrix, r: Trajectory, tol: ToleranceConfig = DEFAULT_TOL) -> DetectionReport:
    """Same decision using the syndrome ``R(sigma) r``; windows are time steps."""
    s = apply_shift_polynomial(R, r)
    return _report(np.max(np.abs(s.samples), axis=0), _signal_scale(r), tol)


def _observation_rows(sys: SystemModel, T: int) -> np.ndarray:
    """``(N, T, n)`` array with ``[i, t] = C_i A^t``."""
    out = np.empty((sys.N, T, sys.n), dtype=complex)
    rows = np.array(sys.C)
    for t in range(T):
        out[:, t, :] = rows
        rows = rows @ sys.A
    return out


def _fit(O: np.ndarray, r: Trajectory, trusted: list[int], tol: ToleranceConfig):
    """Least-squares state from 0-based ``trusted`` rows; returns (x, max residual)."""
    n = O.shape[2]
    M = O[trusted].reshape(-1, n)
    b = r.samples[trusted].reshape(-1)
    if not trusted or numerical_rank(M, tol.rank_tol) < n:
        raise InsufficientObservability(f"trusted sensors {[i + 1 for i in trusted]} do not observe the state")
    x, *_ = np.linalg.lstsq(M, b, rcond=None)
    res = float(np.max(np.abs(M @ x - b)))
    return x, res


def reconstruct_state(
    sys: SystemModel, r: Trajectory, trusted: Iterable[int], tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Least-squares ``x(0)`` from the samples of the 1-based ``trusted`` sensors."""
    trusted = sorted(set(trusted))
    if any(not 1 <= i <= sys.N for i in trusted):
        raise InsufficientObservability(f"sensor indices {trusted} outside 1..{sys.N}")
    x, _ = _fit(_observation_rows(sys, r.T), r, [i - 1 for i in trusted], tol)
    return x


def max_correctable(delta: int) -> int:
    """Largest attack weight strictly below ``delta / 2``."""
    return ceil(delta / 2) - 1


def correct(
    sys: SystemModel,
    r: Trajectory,
    tol: ToleranceConfig = DEFAULT_TOL,
    delta: int | None = None,
) -> CorrectionResult:
    """Recover the unique closest attack-free trajectory.

    Supports are tried in order of size, lexicographically within a size.
    A support is accepted when the fit on the remaining sensors leaves a
    residual of at most ``residual_tol`` times the signal's peak magnitude.

    Raises
    ------
    NoConsistentSupport
        No support of size below ``delta / 2`` explains ``r``.
    AmbiguousCorrection
        Two accepted supports of the minimal size give different trajectories.
    """
    if r.N != sys.N:
        raise DimensionMismatch(f"trajectory has {r.N} sensors, system has {sys.N}")
    if r.T < sys.n:
        raise HorizonTooShort(f"horizon T = {r.T} shorter than n = {sys.n}")
    if delta is None:
        delta = security_index_subset(build_coding_matrix(sys), tol).delta
    q_max = max_correctable(delta)
    scale = _signal_scale(r)
    O = _observation_rows(sys, r.T)
    tested = 0
    for q in range(q_max + 1):
        accepted = []
        for K in combinations(range(sys.N), q):
            tested += 1
            trusted = [i for i in range(sys.N) if i not in K]
            x, res = _fit(O, r, trusted, tol)
            if res <= tol.residual_tol * scale:
                accepted.append((K, x, res))
        if not accepted:
            continue
        K, x, res = accepted[0]
        corrected = simulate(sys, x, r.T)
        for K2, x2, _ in accepted[1:]:
            other = simulate(sys, x2, r.T)
            gap = float(np.max(np.abs(other.samples - corrected.samples)))
            if gap > tol.residual_tol * scale:
                raise AmbiguousCorrection(
                    f"supports {[k + 1 for k in K]} and {[k + 1 for k in K2]} disagree by {gap:.3g}"
                )
        log.debug("correct: accepted support %s after %d fits", [k + 1 for k in K], tested)
        return CorrectionResult(x, frozenset(k + 1 for k in K), corrected, res / scale, tested)
    raise NoConsistentSupport(
        f"no attack support of size <= {q_max} (delta = {delta}) explains the signal; tried {tested}"
    )
