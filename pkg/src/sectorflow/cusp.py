"""Reduced two-sector four-fold dynamics: asymptotics, cusp rate, phase portrait."""
from __future__ import annotations

import math
import warnings

import numpy as np

from . import kernels
from .integrate import Trajectory

QUARTER = math.pi / 4
EIGHTH = math.pi / 8
ANGLE_FLOOR = 1e-4
FIT_WINDOW = (1e-8, 1e-2)

CUSP_ZETA1 = "cusp_zeta1"
CUSP_ZETA2 = "cusp_zeta2"
EIGHTFOLD = "eightfold_symmetric"
UNDECIDED = "undecided"


def _check(name, value, hi):
    if not -1e-12 <= value <= hi + 1e-12:
        raise ValueError(f"{name}={value} outside [0, {hi}]")


def reduced_rhs(zeta1, zeta2, gamma):
    for name, v in (("zeta1", zeta1), ("zeta2", zeta2), ("gamma", gamma)):
        _check(name, v, math.pi / 2)
    p = math.sin(zeta1) * math.sin(zeta2) * math.cos(2.0 * gamma + zeta1 + zeta2)
    return np.array([-p, p, math.sin(gamma) * math.sin(zeta1 - zeta2) * math.cos(gamma + zeta1 + zeta2)])


def one_dim_rhs(gamma, branch="+"):
    """Gap flow on the invariant lines ``gamma = zeta2`` (``+``) or ``gamma = zeta1`` (``-``)."""
    _check("gamma", gamma, QUARTER)
    sign = {"+": 1.0, "-": -1.0}[branch]
    return sign * math.sin(gamma) * math.sin(QUARTER - 2.0 * gamma) * math.cos(gamma + QUARTER)


def integrate_reduced(y0, t_end, dt=1e-3, sample_dt=None):
    """RK4 trajectories of the reduced system from one or many initial states.

    ``y0`` is ``(3,)`` or ``(batch, 3)``; returns one :class:`Trajectory` or a
    list of them.  ``sample_dt`` sets the output spacing (default: ``dt``).
    """
    y0 = np.asarray(y0, dtype=float)
    single = y0.ndim == 1
    batch = np.atleast_2d(y0)
    for z1, z2, g in batch:
        for name, v in (("zeta1", z1), ("zeta2", z2), ("gamma", g)):
            _check(name, v, math.pi / 2)
    nsteps = int(round(t_end / dt))
    every = max(1, int(round((sample_dt or dt) / dt)))
    nsteps -= nsteps % every
    ys = kernels.rk4_reduced(np.ascontiguousarray(batch), dt, nsteps, every)
    t = dt * every * np.arange(ys.shape[1])
    trajs = [Trajectory(t, ys[b]) for b in range(len(batch))]
    return trajs[0] if single else trajs


def integrate_one_dim(gamma0, branch, t_end, dt=1e-3, sample_dt=None):
    """RK4 solutions of the one-dimensional gap flow; returns ``(t, gammas)``."""
    g0 = np.atleast_1d(np.asarray(gamma0, dtype=float))
    for g in g0:
        _check("gamma", g, QUARTER)
    sign = {"+": 1.0, "-": -1.0}[branch]
    nsteps = int(round(t_end / dt))
    every = max(1, int(round((sample_dt or dt) / dt)))
    nsteps -= nsteps % every
    out = kernels.rk4_one_dim(np.ascontiguousarray(g0), sign, dt, nsteps, every)
    return dt * every * np.arange(out.shape[1]), out


def classify_state(y):
    z1, z2, g = y
    if z1 < ANGLE_FLOOR:
        return CUSP_ZETA1
    if z2 < ANGLE_FLOOR:
        return CUSP_ZETA2
    if max(abs(z1 - EIGHTH), abs(z2 - EIGHTH), abs(g - EIGHTH)) < ANGLE_FLOOR:
        return EIGHTFOLD
    return UNDECIDED


def classify_asymptotic(traj: Trajectory):
    """Label the end state of a reduced trajectory.

    Trajectories shorter than 10 time units are ``undecided`` with a warning.
    """
    if traj.t_end < 10.0:
        warnings.warn(f"trajectory too short to classify (T_end = {traj.t_end:g} < 10)")
        return UNDECIDED
    return classify_state(traj.final)


def cusp_rate(traj: Trajectory, which=None):
    """Exponential collapse rate of the vanishing sector angle.

    Least-squares slope of ``log(angle)`` against time over the samples with
    the angle inside ``[1e-8, 1e-2]``; returns ``-slope``.  ``traj.y`` may
    also be a one-column array holding the collapsing angle directly.
    """
    y = np.asarray(traj.y)
    if y.ndim == 1:
        angle = y
    else:
        if which is None:
            label = classify_state(y[-1])
            if label not in (CUSP_ZETA1, CUSP_ZETA2):
                raise ValueError(f"trajectory does not cusp (classified {label})")
            which = label
        angle = y[:, 0] if which == CUSP_ZETA1 else y[:, 1]
    lo, hi = FIT_WINDOW
    sel = (angle >= lo) & (angle <= hi)
    if np.count_nonzero(sel) < 3:
        raise ValueError("insufficient decay: collapsing angle never enters the fit window")
    slope = np.polyfit(traj.t[sel], np.log(angle[sel]), 1)[0]
    return float(-slope)


def phase_portrait(resolution=64):
    """Sample ``(dzeta2/dt, dgamma/dt)`` with ``zeta1 = pi/4 - zeta2`` on ``[0, pi/4]^2``.

    Returns ``(zeta2_grid, gamma_grid, dzeta2, dgamma)``, each indexed
    ``[i_gamma, i_zeta2]``.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    axis = np.linspace(0.0, QUARTER, resolution)
    Z2, G = np.meshgrid(axis, axis)
    Z1 = QUARTER - Z2
    p = np.sin(Z1) * np.sin(Z2) * np.cos(2.0 * G + Z1 + Z2)
    dg = np.sin(G) * np.sin(Z1 - Z2) * np.cos(G + Z1 + Z2)
    return Z2, G, p, dg


def basin_map(resolution=64, t_end=60.0, dt=1e-2):
    """Asymptotic label of every portrait grid point, indexed like :func:`phase_portrait`.

    ``dt`` is coarser than the integrator default; RK4 at this step resolves
    the O(1) rates of the reduced system far below the classification floor.
    """
    Z2, G, _, _ = phase_portrait(resolution)
    y0 = np.column_stack([(QUARTER - Z2).ravel(), Z2.ravel(), G.ravel()])
    nsteps = int(round(t_end / dt))
    final = kernels.rk4_reduced(np.ascontiguousarray(y0), dt, nsteps, nsteps)[:, -1]
    labels = np.array([classify_state(y) for y in final]).reshape(Z2.shape)
    return Z2, G, labels
