"""Attack-free trajectories and attack injection."""

from __future__ import annotations

import logging

import numpy as np

from secidx.errors import DimensionMismatch, InvalidWeight
from secidx.model import AttackSignal, SystemModel, Trajectory

log = logging.getLogger(__name__)


def simulate(sys: SystemModel, x0, T: int) -> Trajectory:
    """Outputs ``y(t) = C x(t)`` for ``t = 0 .. T-1`` by iterating the state."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    x = np.asarray(x0, dtype=complex).reshape(-1)
    if x.shape[0] != sys.n:
        raise DimensionMismatch(f"x0 has length {x.shape[0]}, expected {sys.n}")
    out = np.empty((sys.N, T), dtype=complex)
    for t in range(T):
        out[:, t] = sys.C @ x
        x = sys.A @ x
    return Trajectory(out)


def inject(y: Trajectory, eta: AttackSignal) -> Trajectory:
    """Received signal ``r = y + eta``."""
    if y.samples.shape != eta.samples.shape:
        raise DimensionMismatch(f"trajectory {y.samples.shape} vs attack {eta.samples.shape}")
    return Trajectory(y.samples + eta.samples)


def random_attack(
    N: int,
    T: int,
    q: int,
    seed: int,
    magnitude: float = 1.0,
    first_steps: int | None = None,
) -> AttackSignal:
    """Seeded attack on exactly ``q`` sensors chosen uniformly at random.

    Entries are standard normal times ``magnitude``. With ``first_steps``
    set, only samples ``t < first_steps`` are attacked.
    """
    if not 0 <= q <= N:
        raise InvalidWeight(f"attack weight {q} outside 0..{N}")
    if q > 0 and not magnitude > 0:
        raise InvalidWeight("a nonzero attack needs a positive magnitude")
    rng = np.random.default_rng(seed)
    rows = np.sort(rng.choice(N, size=q, replace=False))
    width = T if first_steps is None else max(1, min(T, first_steps))
    samples = np.zeros((N, T), dtype=complex)
    for i in rows:
        vals = rng.standard_normal(width) * magnitude
        while not np.any(vals):  # measure-zero, keeps the weight exact
            vals = rng.standard_normal(width) * magnitude
        samples[i, :width] = vals
    log.debug("random_attack seed=%d N=%d T=%d q=%d rows=%s", seed, N, T, q, (rows + 1).tolist())
    return AttackSignal(samples)
