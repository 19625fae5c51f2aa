"""Reduced Lie-Poisson dynamics on g* for the group case M = G.

Sign convention: ``mu' = ad*_{dh(mu)} mu`` with ``ad*_x = coad_matrix(x)``,
i.e. ``d/dt (mu | x) = (mu | [x, dh(mu)])``. Ad*-invariant functions give a
vanishing field, and they are Casimirs of every such flow.
"""

from __future__ import annotations

import csv
import dataclasses
import math

import numpy as np

from .errors import DivergenceError, InvalidInputError
from .liealg import StructureTensor
from .polynomial import Polynomial


@dataclasses.dataclass(frozen=True, eq=False)
class MomentumState:
    t: float
    mu: np.ndarray


def lp_vector_field(algebra: StructureTensor, h: Polynomial, mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    return algebra.coad_matrix(h.gradient(mu)) @ mu


def integrate(algebra: StructureTensor, h: Polynomial, mu0, dt: float, t_end: float) -> list[MomentumState]:
    """Classical RK4 with ``ceil(t_end/dt)`` equal steps ending exactly at ``t_end``."""
    if not (dt > 0 and t_end > 0):
        raise InvalidInputError("dt and t_end must be positive")
    mu = np.asarray(mu0, dtype=float).copy()
    if mu.shape != (algebra.dim,):
        raise InvalidInputError(f"mu0 must have length {algebra.dim}")
    steps = math.ceil(t_end / dt)
    h_step = t_end / steps

    def field(x):
        return lp_vector_field(algebra, h, x)

    traj = [MomentumState(0.0, mu.copy())]
    for i in range(1, steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = field(mu)
            k2 = field(mu + 0.5 * h_step * k1)
            k3 = field(mu + 0.5 * h_step * k2)
            k4 = field(mu + h_step * k3)
            nxt = mu + (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(nxt)):
            raise DivergenceError(f"non-finite state at step {i}", last_state=traj[-1])
        mu = nxt
        traj.append(MomentumState(i * h_step, mu.copy()))
    return traj


def casimir_drift(trajectory, casimirs) -> list[float]:
    """Per-Casimir ``max_t |C(mu(t)) - C(mu(0))| / max(1, |C(mu(0))|)``."""
    out = []
    for c in casimirs:
        c0 = c(trajectory[0].mu)
        worst = max(abs(c(s.mu) - c0) for s in trajectory)
        out.append(worst / max(1.0, abs(c0)))
    return out


def write_trajectory_csv(trajectory, fh) -> None:
    n = len(trajectory[0].mu)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t"] + [f"mu_{i}" for i in range(n)])
    for s in trajectory:
        writer.writerow([repr(float(s.t))] + [repr(float(v)) for v in s.mu])


def read_trajectory_csv(fh) -> list[MomentumState]:
    reader = csv.reader(fh)
    header = next(reader)
    if not header or header[0] != "t":
        raise InvalidInputError("trajectory CSV must start with a 't' column")
    return [MomentumState(float(row[0]), np.array([float(v) for v in row[1:]])) for row in reader]
