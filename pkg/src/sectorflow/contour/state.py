"""Patch contours, the boundary-integral velocity, and RK4 advection."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .. import kernels
from .geometry import rotate, signed_area


class SimulationHalt(RuntimeError):
    """Raised when the evolution cannot continue (non-finite velocity, tangled boundary)."""


@dataclass(frozen=True)
class PatchContour:
    """Closed polygonal boundary of a uniform patch, counterclockwise.

    ``pinned`` indexes nodes held at the origin; ``tracked`` indexes material
    nodes that remeshing must keep (their indices are remapped on remesh).
    """
    nodes: np.ndarray
    pinned: tuple = ()
    strength: float = 1.0
    tracked: tuple = ()
    closed: bool = True

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise ValueError(f"nodes must have shape (n, 2), got {nodes.shape}")
        if len(nodes) < 3:
            raise ValueError("a contour needs at least 3 nodes")
        if not np.all(np.isfinite(nodes)):
            raise ValueError("contour nodes contain NaN or inf")
        if not math.isfinite(self.strength):
            raise ValueError("strength must be finite")
        n = len(nodes)
        for i in (*self.pinned, *self.tracked):
            if not 0 <= i < n:
                raise ValueError(f"node index {i} out of range for {n} nodes")
        for i in self.pinned:
            if np.any(nodes[i] != 0.0):
                raise ValueError(f"pinned node {i} is not at the origin")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "pinned", tuple(sorted(int(i) for i in self.pinned)))
        object.__setattr__(self, "tracked", tuple(int(i) for i in self.tracked))

    def __len__(self):
        return len(self.nodes)

    @property
    def area(self):
        return signed_area(self.nodes)

    def with_nodes(self, nodes, tracked=None):
        return replace(self, nodes=nodes, tracked=self.tracked if tracked is None else tracked)

    def is_simple(self):
        from shapely.geometry import LinearRing
        return bool(LinearRing(self.nodes).is_simple)


@dataclass(frozen=True)
class SimulationState:
    """Contours at a time; with ``symmetry = m`` each stored contour stands for its ``m`` rotated images."""
    contours: tuple
    time: float = 0.0
    symmetry: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "contours", tuple(self.contours))
        if not self.contours:
            raise ValueError("state needs at least one contour")
        if self.symmetry is not None and (int(self.symmetry) != self.symmetry or self.symmetry < 1):
            raise ValueError(f"symmetry must be a positive integer, got {self.symmetry}")

    @property
    def copies(self):
        return self.symmetry or 1

    def source_loops(self):
        """All loops that induce velocity: ``(nx, ny, starts, strengths)``."""
        xs, ys, starts, w = [], [], [0], []
        for k in range(self.copies):
            ang = 2.0 * math.pi * k / self.copies
            for c in self.contours:
                p = rotate(c.nodes, ang) if k else c.nodes
                xs.append(p[:, 0])
                ys.append(p[:, 1])
                starts.append(starts[-1] + len(p))
                w.append(float(c.strength))
        return (np.ascontiguousarray(np.concatenate(xs)), np.ascontiguousarray(np.concatenate(ys)),
                np.asarray(starts, dtype=np.int64), np.asarray(w, dtype=float))

    def total_area(self):
        return self.copies * sum(c.area for c in self.contours)


def velocity_at(state: SimulationState, points):
    """Velocity induced by all patches at ``points`` (shape ``(2,)`` or ``(k, 2)``).

    Each straight segment's log-kernel integral is evaluated in closed form, so
    targets on or near the boundary carry no quadrature error.
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if not np.all(np.isfinite(pts)):
        raise ValueError("target points contain NaN or inf")
    nx, ny, starts, w = state.source_loops()
    ux, uy = kernels.loop_velocity(nx, ny, starts, w,
                                   np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]))
    u = np.column_stack([ux, uy])
    return u[0] if single else u


def _node_velocities(state: SimulationState):
    allnodes = np.vstack([c.nodes for c in state.contours])
    u = velocity_at(state, allnodes)
    out, i = [], 0
    for c in state.contours:
        v = u[i:i + len(c)].copy()
        if c.pinned:
            v[list(c.pinned)] = 0.0
        out.append(v)
        i += len(c)
    if not all(np.all(np.isfinite(v)) for v in out):
        raise SimulationHalt(f"non-finite node velocity at t={state.time:.6g}")
    return out


def _moved(state, base, vel, h):
    cs = tuple(c.with_nodes(b + h * v) for c, b, v in zip(state.contours, base, vel))
    return replace(state, contours=cs)


def step(state: SimulationState, dt):
    """One classical RK4 step of every non-pinned node; returns the new state."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    base = [c.nodes for c in state.contours]
    k1 = _node_velocities(state)
    k2 = _node_velocities(_moved(state, base, k1, 0.5 * dt))
    k3 = _node_velocities(_moved(state, base, k2, 0.5 * dt))
    k4 = _node_velocities(_moved(state, base, k3, dt))
    cs = []
    for c, b, a1, a2, a3, a4 in zip(state.contours, base, k1, k2, k3, k4):
        new = b + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        if c.pinned:
            new[list(c.pinned)] = 0.0
        cs.append(c.with_nodes(new))
    return replace(state, contours=tuple(cs), time=state.time + dt)


def disk_contour(n=512, radius=1.0, strength=1.0, equal_area=True):
    """Regular ``n``-gon approximating the disk.

    With ``equal_area`` the vertices sit slightly outside the circle so the
    polygon encloses exactly ``pi radius^2``.
    """
    th = 2.0 * math.pi * np.arange(n) / n
    if equal_area:
        radius = radius * math.sqrt(2.0 * math.pi / (n * math.sin(2.0 * math.pi / n)))
    return PatchContour(radius * np.column_stack([np.cos(th), np.sin(th)]), strength=strength)


def ellipse_contour(a, b, n=512, angle=0.0, strength=1.0):
    th = 2.0 * math.pi * np.arange(n) / n
    return PatchContour(rotate(np.column_stack([a * np.cos(th), b * np.sin(th)]), angle),
                        strength=strength)
