"""Fixed-step RK4 integration and empirical verification helpers.

Deterministic classical Runge-Kutta with a fixed step keeps golden tests
byte-stable; the fields here are smooth low-degree polynomials over desk
scale horizons, so adaptivity buys nothing.  A trajectory whose state norm
exceeds the divergence guard aborts with the blow-up time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, DivergenceError
from .manifold import CentreManifoldMap
from .poly import PolyMap
from .spectral import SpectralSplit

DIVERGENCE_NORM = 1e6


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray           # uniform grid, t_k = k*dt
    states: np.ndarray          # one row per sample
    labels: tuple[str, ...]

    def __len__(self):
        return len(self.times)


def integrate(field: PolyMap, x0: Sequence[float], t_end: float, dt: float,
              labels: Sequence[str] | None = None,
              linear: np.ndarray | None = None,
              max_norm: float = DIVERGENCE_NORM) -> Trajectory:
    """Classical fourth-order Runge-Kutta with fixed step ``dt``.

    ``field`` is the complete right-hand side unless ``linear`` is given,
    in which case the rhs is ``linear @ x + field(x)``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < dt:
        raise ValueError("t_end must be at least one step")
    n = len(field)
    if field.nvars != n:
        raise DimensionMismatchError("field must map a space to itself")
    x = [float(v) for v in x0]
    if len(x) != n:
        raise DimensionMismatchError(
            f"initial state has {len(x)} entries, field expects {n}"
        )
    if labels is None:
        labels = tuple(f"x{i + 1}" for i in range(n))
    poly_rhs = field.evaluator()
    if linear is None:
        rhs = poly_rhs
    else:
        lin_rows = [list(map(float, row)) for row in np.asarray(linear)]

        def rhs(state):
            out = poly_rhs(state)
            for i, row in enumerate(lin_rows):
                out[i] += sum(a * s for a, s in zip(row, state))
            return out

    steps = int(round(t_end / dt))
    states = np.empty((steps + 1, n))
    states[0] = x
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(steps):
        k1 = rhs(x)
        k2 = rhs([xi + half * ki for xi, ki in zip(x, k1)])
        k3 = rhs([xi + half * ki for xi, ki in zip(x, k2)])
        k4 = rhs([xi + dt * ki for xi, ki in zip(x, k3)])
        x = [
            xi + sixth * (a + 2.0 * b + 2.0 * c + d)
            for xi, a, b, c, d in zip(x, k1, k2, k3, k4)
        ]
        norm = math.sqrt(sum(v * v for v in x))
        if not math.isfinite(norm) or norm > max_norm:
            raise DivergenceError((step + 1) * dt, norm)
        states[step + 1] = x
    times = np.arange(steps + 1) * dt
    return Trajectory(times=times, states=states, labels=tuple(labels))


def manifold_residual(traj: Trajectory, split: SpectralSplit,
                      manifold: CentreManifoldMap) -> np.ndarray:
    """Per-sample max over stable components of |v_j(t) - h_j(u(t))|.

    The trajectory must be recorded in eigenbasis coordinates (centre
    coordinates first).
    """
    c, s = split.centre_dim, split.stable_dim
    if traj.states.shape[1] != c + s:
        raise DimensionMismatchError(
            f"trajectory has {traj.states.shape[1]} coordinates, "
            f"split expects {c + s}"
        )
    out = np.empty(len(traj))
    for k, state in enumerate(traj.states):
        u = state[:c]
        out[k] = max(
            abs(state[c + j] - manifold.h[j].evaluate(u)) for j in range(s)
        )
    return out


def amplitude_series(traj: Trajectory, centre_indices: tuple[int, int] = (0, 1)
                     ) -> np.ndarray:
    """(t, r) samples with r = sqrt(u1^2 + u2^2) over the two centre columns."""
    i, j = centre_indices
    r = np.hypot(traj.states[:, i], traj.states[:, j])
    return np.column_stack([traj.times, r])


def trajectory_csv(traj: Trajectory) -> str:
    """CSV text: header of labels, one row per sample, 17 significant digits."""
    lines = ["t," + ",".join(traj.labels)]
    for t, row in zip(traj.times, traj.states):
        lines.append(
            format(t, ".17g") + "," + ",".join(format(v, ".17g") for v in row)
        )
    return "\n".join(lines) + "\n"
