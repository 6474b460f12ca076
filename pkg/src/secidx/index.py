"""Security index: the fewest sensors any nonzero output trajectory touches.

Three routes are implemented and cross-checked by :func:`security_index`:

* ``subset-kernel``: find the largest sensor set ``J`` whose stacked coding
  blocks ``G_J`` have a kernel; a state in that kernel silences ``J``, so
  ``delta = N - |J|``.
* ``spark``: the smallest number of block columns of a check matrix ``H``
  that are linearly dependent.
* ``eigen``: for diagonalizable ``A``, the sparsest ``C x`` over nonzero
  ``x`` in a single eigenspace.

:func:`oracle_security_index` is a plain exhaustive enumeration kept for
testing the optimized routes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from secidx.coding import CheckMatrix, CodingMatrix, build_check_matrix, build_coding_matrix, stack_subset
from secidx.errors import MethodDisagreement, NotDiagonalizable, TooManySensors
from secidx.linalg import has_kernel, null_space, spectral_norm
from secidx.model import DEFAULT_TOL, SystemModel, ToleranceConfig

SUBSET = "subset-kernel"
SPARK = "spark"
EIGEN = "eigen"
ORACLE = "oracle"

ORACLE_MAX_SENSORS = 20
EIGEN_CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class SecurityIndexReport:
    delta: int
    method: str
    witness_state: np.ndarray | None
    witness_support: frozenset
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        from secidx.io import encode_vector

        return {
            "delta": self.delta,
            "method": self.method,
            "values": dict(sorted(self.values.items())),
            "witness_state": None if self.witness_state is None else encode_vector(self.witness_state),
            "witness_support": sorted(self.witness_support),
        }


@dataclass(frozen=True)
class EigenStructure:
    eigenvalues: np.ndarray
    eigenspaces: list  # orthonormal n x d_j bases
    diagonalizable: bool


def _complement(J, N: int) -> frozenset:
    return frozenset(range(1, N + 1)) - frozenset(J)


def _first_unit(n: int) -> np.ndarray:
    x = np.zeros(n, dtype=complex)
    x[0] = 1.0
    return x


def security_index_subset(cm: CodingMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> SecurityIndexReport:
    """Search silenceable sensor sets from size ``N - 1`` downward."""
    N, scale = cm.N, cm.scale
    for L in range(N - 1, 0, -1):
        for J in combinations(range(1, N + 1), L):
            GJ = stack_subset(cm, J)
            if has_kernel(GJ, tol.rank_tol, scale):
                x = null_space(GJ, tol.rank_tol, scale)[:, 0]
                return SecurityIndexReport(N - L, SUBSET, x, _complement(J, N), {SUBSET: N - L})
    # nothing can be silenced: every nonzero state drives every sensor
    return SecurityIndexReport(N, SUBSET, _first_unit(cm.n), _complement((), N), {SUBSET: N})


def spark(H: CheckMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Smallest number of block columns of ``H`` with a common kernel vector.

    A single-sensor system has an empty ``H``; its spark is 1 by convention.
    """
    if H.N == 1:
        return 1
    scale = spectral_norm(H.H)
    for L in range(1, H.N + 1):
        for J in combinations(range(1, H.N + 1), L):
            if has_kernel(H.columns(J), tol.rank_tol, scale):
                return L
    return H.N


def _cluster(values: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage clusters of points closer than ``radius``."""
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(values)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def eigen_structure(A: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> EigenStructure:
    """Distinct eigenvalues of ``A`` and orthonormal bases of their eigenspaces.

    Eigenvalues within ``1e-8 * ||A||`` of each other are merged. ``A`` is
    reported diagonalizable only if the eigenspace dimensions add up to ``n``
    and the combined basis is well conditioned; nearly parallel eigenvectors
    are how a defective matrix shows up after rounding.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    norm = spectral_norm(A)
    lam = np.linalg.eigvals(A)
    groups = _cluster(lam, EIGEN_CLUSTER_TOL * norm)
    eigenvalues, spaces = [], []
    for g in groups:
        mu = np.mean(lam[g])
        eigenvalues.append(mu)
        spaces.append(null_space(A - mu * np.eye(n), tol.rank_tol, norm))
    dims = sum(B.shape[1] for B in spaces)
    diagonalizable = False
    if dims == n and all(B.shape[1] >= 1 for B in spaces):
        V = np.hstack(spaces)
        smin = np.linalg.svd(V, compute_uv=False)[-1]
        diagonalizable = bool(smin > np.sqrt(tol.rank_tol))
    return EigenStructure(np.array(eigenvalues), spaces, diagonalizable)


def security_index_eigen(
    sys: SystemModel, es: EigenStructure, tol: ToleranceConfig = DEFAULT_TOL
) -> SecurityIndexReport:
    """Minimum over eigenspaces of the sparsest output direction.

    Within an eigenspace with basis ``B``, the largest sensor set ``K`` with
    ``ker(C_K B) != {0}`` gives the sparsest ``C x``, of weight ``N - |K|``.
    """
    if not es.diagonalizable:
        raise NotDiagonalizable("eigen method needs a diagonalizable A")
    N = sys.N
    scale = spectral_norm(sys.C)
    best = None
    for B in es.eigenspaces:
        M = sys.C @ B
        for size in range(N - 1, -1, -1):
            hit = None
            for K in combinations(range(N), size):
                MK = M[list(K)]
                if has_kernel(MK, tol.rank_tol, scale):
                    hit = K
                    break
            if hit is not None:
                break
        z = null_space(M[list(hit)], tol.rank_tol, scale)[:, 0]
        value = N - len(hit)
        if best is None or value < best[0]:
            best = (value, B @ z, _complement([k + 1 for k in hit], N))
    delta, x, supp = best
    return SecurityIndexReport(delta, EIGEN, x, supp, {EIGEN: delta})


def oracle_security_index(cm: CodingMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Exhaustive, unpruned enumeration over every nonempty sensor subset."""
    N, n = cm.N, cm.n
    if N > ORACLE_MAX_SENSORS:
        raise TooManySensors(f"oracle enumerates 2^N subsets; N = {N} > {ORACLE_MAX_SENSORS}")
    smax = np.linalg.norm(cm.G, 2)
    largest = 0
    for mask in range(1, 1 << N):
        rows = [i for i in range(N) if mask >> i & 1]
        GK = np.concatenate([cm.blocks[i] for i in rows], axis=0)
        cutoff = tol.rank_tol * max(GK.shape) * smax
        if np.linalg.matrix_rank(GK, tol=cutoff) < n:
            largest = max(largest, len(rows))
    return N - largest


def is_maximally_secure(cm: CodingMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Every sensor on its own observes the whole state."""
    scale = cm.scale
    return not any(has_kernel(cm.blocks[i], tol.rank_tol, scale) for i in range(cm.N))


def security_index(
    sys: SystemModel,
    tol: ToleranceConfig = DEFAULT_TOL,
    spark_budget: int = 12,
) -> SecurityIndexReport:
    """Compute the security index by every applicable method.

    The subset-kernel method always runs; the eigen method runs when ``A`` is
    diagonalizable; the spark method runs when ``N <= spark_budget``. The
    returned report carries the subset-kernel witness and, in ``values``,
    every method's result.

    Raises
    ------
    MethodDisagreement
        Two methods produced different values.
    """
    cm = build_coding_matrix(sys)
    report = security_index_subset(cm, tol)
    values = {SUBSET: report.delta}
    es = eigen_structure(sys.A, tol)
    if es.diagonalizable:
        values[EIGEN] = security_index_eigen(sys, es, tol).delta
    if sys.N <= spark_budget:
        values[SPARK] = spark(build_check_matrix(cm, tol), tol)
    if len(set(values.values())) > 1:
        raise MethodDisagreement(values)
    return SecurityIndexReport(report.delta, SUBSET, report.witness_state, report.witness_support, values)
