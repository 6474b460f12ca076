"""Seeded random observable systems for cross-checking the index methods.

Plain dense draws are almost always maximally secure, which exercises very
little. The generator therefore mixes several families:

``dense``
    Gaussian ``A`` and ``C``.
``masked``
    Gaussian entries with a random zero pattern in ``A`` and ``C``; the
    structural zeros let some sensors be silenced.
``modal``
    ``A = T D T^-1`` with distinct real eigenvalues and ``C = C_m T^-1``
    where ``C_m`` (the outputs in eigen-coordinates) is sparse.
``repeated``
    Like ``modal`` but one eigenvalue is repeated with a full eigenspace
    (geometric multiplicity >= 2).
``defective``
    ``D`` contains a 2x2 Jordan block, so ``A`` is not diagonalizable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from secidx.errors import NotObservable
from secidx.model import DEFAULT_TOL, SystemModel, ToleranceConfig, make_system

KINDS = ("dense", "masked", "modal", "repeated", "defective")


@dataclass(frozen=True)
class SuiteSystem:
    sys: SystemModel
    kind: str
    seed: int


def _well_conditioned(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        T = rng.standard_normal((n, n))
        if np.linalg.cond(T) < 1e2:
            return T


def _sparse(rng: np.random.Generator, shape, keep: float) -> np.ndarray:
    return rng.standard_normal(shape) * (rng.random(shape) < keep)


def _spread_eigenvalues(rng: np.random.Generator, k: int) -> np.ndarray:
    """``k`` distinct values in [-1.2, 1.2], pairwise at least 0.1 apart."""
    while True:
        lam = rng.uniform(-1.2, 1.2, size=k)
        if k < 2 or np.min(np.diff(np.sort(lam))) > 0.1:
            return lam


def _draw(rng: np.random.Generator, kind: str, n: int, N: int):
    if kind == "dense":
        return rng.standard_normal((n, n)) / np.sqrt(n), rng.standard_normal((N, n))
    if kind == "masked":
        A = _sparse(rng, (n, n), rng.uniform(0.4, 0.8)) / np.sqrt(n)
        C = _sparse(rng, (N, n), rng.uniform(0.3, 0.7))
        return A, C
    if kind == "modal":
        D = np.diag(_spread_eigenvalues(rng, n))
    elif kind == "repeated":
        mult = int(rng.integers(2, n + 1))
        lam = _spread_eigenvalues(rng, n - mult + 1)
        D = np.diag(np.concatenate([np.full(mult, lam[0]), lam[1:]]))
    elif kind == "defective":
        lam = _spread_eigenvalues(rng, n - 1)
        D = np.diag(np.concatenate([lam[:1], lam]))
        D[0, 1] = 1.0
    else:
        raise ValueError(f"unknown kind {kind!r}")
    T = _well_conditioned(rng, n)
    Tinv = np.linalg.inv(T)
    Cm = _sparse(rng, (N, n), rng.uniform(0.35, 0.75))
    return T @ D @ Tinv, Cm @ Tinv


def random_system(
    seed: int, kind: str, n: int, N: int, tol: ToleranceConfig = DEFAULT_TOL, max_tries: int = 1000
) -> SystemModel:
    """Draw an observable system of the given family; redraws on failure."""
    if kind in ("repeated", "defective") and n < 2:
        raise ValueError(f"{kind} systems need n >= 2")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        A, C = _draw(rng, kind, n, N)
        try:
            return make_system(A, C, tol)
        except NotObservable:
            continue
    raise RuntimeError(f"no observable {kind} system with n={n}, N={N} after {max_tries} draws")


def build_suite(
    count: int = 200,
    seed: int = 20160101,
    n_range: tuple[int, int] = (1, 4),
    N_range: tuple[int, int] = (2, 7),
    mix: dict | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[SuiteSystem]:
    """``count`` systems with family proportions given by ``mix``."""
    mix = mix or {"dense": 0.15, "masked": 0.35, "modal": 0.2, "repeated": 0.15, "defective": 0.15}
    kinds = list(mix)
    weights = np.array([mix[k] for k in kinds], dtype=float)
    quotas = np.floor(weights / weights.sum() * count).astype(int)
    quotas[0] += count - quotas.sum()
    rng = np.random.default_rng(seed)
    out = []
    for kind, quota in zip(kinds, quotas):
        lo = max(n_range[0], 2) if kind in ("repeated", "defective") else n_range[0]
        for _ in range(quota):
            n = int(rng.integers(lo, n_range[1] + 1))
            N = int(rng.integers(N_range[0], N_range[1] + 1))
            s = int(rng.integers(2**31))
            out.append(SuiteSystem(random_system(s, kind, n, N, tol), kind, s))
    return out
