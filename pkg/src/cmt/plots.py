"""Figure rendering for analysis reports and trajectories.

Figures are written next to the delimited outputs when the CLI is invoked
with ``--plots DIR``; they are a visual companion, never a data interface
(CSV and JSON stay the canonical boundary).
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .manifold import ReducedSystem
from .sim import Trajectory
from .stability import RadialAnalysis

_DPI = 150


def _save(fig, outdir: str, name: str) -> str:
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_reduced_1d(reduced: ReducedSystem, outdir: str) -> str:
    """udot against u near the origin for a one-dimensional centre."""
    poly = reduced.field[0]
    u = np.linspace(-1.0, 1.0, 401)
    du = np.array([poly.evaluate([v]) for v in u])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(u, du, lw=1.5)
    ax.axhline(0.0, color="k", lw=0.6)
    ax.axvline(0.0, color="k", lw=0.6)
    ax.set_xlabel("u")
    ax.set_ylabel("du/dt")
    ax.set_title("reduced centre dynamics")
    return _save(fig, outdir, "reduced_1d.png")


def plot_reduced_phase(reduced: ReducedSystem, radial: RadialAnalysis | None,
                       outdir: str) -> str:
    """Vector field of a planar reduced system with radial fixed points."""
    span = 1.5 * (radial.r_max / 10.0 if radial is not None else 1.0)
    grid = np.linspace(-span, span, 24)
    X, Y = np.meshgrid(grid, grid)
    U = np.zeros_like(X)
    V = np.zeros_like(Y)
    f1, f2 = reduced.field[0], reduced.field[1]
    for i in range(X.shape[0]):
        for j in range(X.shape[1]):
            U[i, j] = f1.evaluate([X[i, j], Y[i, j]])
            V[i, j] = f2.evaluate([X[i, j], Y[i, j]])
    speed = np.hypot(U, V)
    speed[speed == 0.0] = 1.0
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.quiver(X, Y, U / speed, V / speed, speed, cmap="viridis", width=0.004)
    if radial is not None:
        for ray in radial.rays:
            for p in ray.fixed_points:
                if p.r > 0.0:
                    x = p.r * math.cos(ray.theta)
                    y = p.r * math.sin(ray.theta)
                    color = "tab:red" if p.classification == "source" else "tab:blue"
                    ax.plot(x, y, "o", ms=5, color=color)
    ax.plot(0.0, 0.0, "k+", ms=8)
    ax.set_xlabel("u1")
    ax.set_ylabel("u2")
    ax.set_title("reduced phase plane")
    ax.set_aspect("equal")
    return _save(fig, outdir, "reduced_phase.png")


def plot_radial_profiles(radial: RadialAnalysis, outdir: str) -> str:
    """rdot against r on the rays that carry nonzero fixed points (or a
    spread of sample rays when none do)."""
    chosen = [ray for ray in radial.rays if len(ray.fixed_points) > 1]
    if not chosen:
        step = max(1, len(radial.rays) // 8)
        chosen = list(radial.rays[::step])[:8]
    r = np.linspace(0.0, radial.r_max, 400)
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    for ray in chosen[:8]:
        vals = np.array([ray.radial_poly.evaluate([v]) for v in r])
        style = "--" if ray.tangential else "-"
        ax.plot(r, vals, style, lw=1.2,
                label=f"theta={ray.theta:.3f}" + (" (ray)" if ray.tangential else ""))
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("r")
    ax.set_ylabel("dr/dt")
    ax.set_title("per-ray radial dynamics")
    ax.legend(fontsize=7, loc="best")
    return _save(fig, outdir, "radial_dynamics.png")


def plot_trajectory(traj: Trajectory, outdir: str) -> str:
    """Each state component against time."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for k, label in enumerate(traj.labels):
        ax.plot(traj.times, traj.states[:, k], lw=1.0, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("state")
    ax.set_title("trajectory")
    ax.legend(fontsize=8, loc="best")
    return _save(fig, outdir, "trajectory.png")


def render_analysis_figures(reduced: ReducedSystem,
                            radial: RadialAnalysis | None,
                            outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    written = []
    if reduced.centre_dim == 1:
        written.append(plot_reduced_1d(reduced, outdir))
    elif reduced.centre_dim == 2:
        written.append(plot_reduced_phase(reduced, radial, outdir))
        if radial is not None:
            written.append(plot_radial_profiles(radial, outdir))
    return written


def render_simulation_figures(traj: Trajectory, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    return [plot_trajectory(traj, outdir)]
