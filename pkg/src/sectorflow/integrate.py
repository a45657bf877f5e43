"""Explicit RK4 with fixed steps or step-halving error control."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    status: str = "ok"
    message: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def t_end(self):
        return float(self.t[-1])

    @property
    def final(self):
        return self.y[-1]


def rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(rhs, y0, t_span, dt=1e-3, *, t_eval=None, adaptive=False, tol=1e-10,
              constraint=None, diagnostics=None, dt_min=1e-12):
    """Integrate ``dy/dt = rhs(t, y)`` over ``t_span`` with classical RK4.

    Parameters
    ----------
    rhs : callable ``(t, y) -> ndarray``
    y0 : initial state
    t_span : ``(t0, t1)``
    dt : step size (initial step when ``adaptive``)
    t_eval : output times; defaults to every step of size ``dt``
    adaptive : compare one full step with two half steps and halve on failure
    tol : absolute error per step for ``adaptive``
    constraint : optional :class:`~sectorflow.angles.AngleConstraint`; states are
        projected after every step and integration halts with status
        ``"boundary reached"`` when one leaves the admissible region
    diagnostics : ``{name: fn(t, y)}`` evaluated at the output times

    Returns
    -------
    Trajectory
    """
    t0, t1 = map(float, t_span)
    if not np.isfinite(t1 - t0) or t1 < t0:
        raise ValueError(f"bad time span {t_span}")
    if dt <= 0:
        raise ValueError("dt must be positive")
    y = np.array(y0, dtype=float)
    if constraint is not None:
        y = constraint.project(y)
        if not constraint.admissible(y):
            raise ValueError("initial state violates the angle constraints")
    if t_eval is None:
        n = int(round((t1 - t0) / dt))
        t_eval = t0 + dt * np.arange(n + 1)
        t_eval[-1] = t1
    t_eval = np.asarray(t_eval, dtype=float)
    diagnostics = diagnostics or {}

    ts, ys = [], []
    diag = {k: [] for k in diagnostics}

    def record(t, y):
        ts.append(t)
        ys.append(y.copy())
        for k, fn in diagnostics.items():
            diag[k].append(fn(t, y))

    def frozen_rhs(frozen):
        if frozen is None or len(frozen) == 0:
            return rhs

        def g(t, y):
            d = np.array(rhs(t, y), dtype=float)
            d[frozen] = 0.0
            return d

        return g

    status, message = "ok", ""
    t = t0
    h = dt
    for target in t_eval:
        while t < target - 1e-14 * max(1.0, abs(target)):
            f = frozen_rhs(constraint.frozen(y) if constraint is not None else None)
            step = min(h, target - t)
            if adaptive:
                truncated = step < h
                halved = False
                while True:
                    full = rk4_step(f, t, y, step)
                    half = rk4_step(f, t + 0.5 * step, rk4_step(f, t, y, 0.5 * step), 0.5 * step)
                    err = np.max(np.abs(half - full)) / 15.0
                    if err <= tol or step <= dt_min:
                        break
                    step *= 0.5
                    halved = True
                y_new = half
                if halved or not truncated:
                    h = 2.0 * step if err < tol / 32.0 else step
            else:
                y_new = rk4_step(f, t, y, step)
            t = target if abs(target - (t + step)) < 1e-14 * max(1.0, abs(target)) else t + step
            if not np.all(np.isfinite(y_new)):
                status, message = "halted", f"non-finite state at t={t:.6g}"
                break
            if constraint is not None:
                y_new = constraint.project(y_new)
                if not constraint.admissible(y_new):
                    y = y_new
                    status, message = "boundary reached", f"state left the admissible region at t={t:.6g}"
                    record(t, y)
                    break
            y = y_new
        if status != "ok":
            break
        record(t, y)

    return Trajectory(np.array(ts), np.array(ys), status, message,
                      {k: np.array(v) for k, v in diag.items()})
