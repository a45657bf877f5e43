"""Time stepping with remeshing, per-sample diagnostics, and the spiral and corner experiments."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import (fit_ray_direction, l1_distance_to_disk, line_intersections, perimeter,
                       rotate, signed_area, winding_number)
from .patches import build_sector_patch, build_spiral_patch
from .remesh import radial_spacing, remesh
from .state import SimulationHalt, SimulationState, step, velocity_at

GRID_HALF_WIDTH = 1.5
GRID_SIZE = 64
R0 = 0.3
LINE_DIRECTIONS = math.pi * np.arange(8) / 8


@dataclass(frozen=True)
class Corner:
    index: int
    outgoing: float  # direction of the strand leaving the corner
    incoming: float  # direction of the strand arriving at the corner
    opening: float
    bisector: float


def corner_angles(contour, fit_radius=0.02, min_nodes=3, max_spread=None):
    """Opening angle and bisector of every pinned corner.

    Each of the two boundary strands at a corner is fitted, over its nodes
    within ``fit_radius``, by the least-squares line through the origin.
    With ``max_spread`` a strand is cut at the first node whose polar angle
    differs from that of the corner's neighbour by more than ``max_spread``,
    so only the straight part of a strand that curls further out is fitted.
    """
    if not contour.pinned:
        raise ValueError("contour has no pinned corner")
    nodes = contour.nodes
    n = len(nodes)
    out = []
    for p in contour.pinned:
        strands = []
        for direction in (1, -1):
            pts = []
            k = (p + direction) % n
            ref = math.atan2(nodes[k][1], nodes[k][0])
            while k != p and np.hypot(*nodes[k]) <= fit_radius:
                if max_spread is not None:
                    dev = (math.atan2(nodes[k][1], nodes[k][0]) - ref + math.pi) % (2.0 * math.pi) - math.pi
                    if abs(dev) > max_spread:
                        break
                pts.append(nodes[k])
                k = (k + direction) % n
            if len(pts) < min_nodes:
                raise ValueError(f"refine mesh: only {len(pts)} nodes within r = {fit_radius:g} of corner {p}")
            strands.append(fit_ray_direction(np.array(pts)))
        a, b = strands
        opening = (b - a) % (2.0 * math.pi)
        out.append(Corner(p, a, b, opening, a + 0.5 * opening))
    return out


def disk_velocity(points):
    """Velocity of the unit-disk patch: ``x^perp / 2`` inside, ``x^perp / (2 |x|^2)`` outside."""
    r2 = np.einsum("ij,ij->i", points, points)
    scale = np.where(r2 <= 1.0, 0.5, 0.5 / np.maximum(r2, 1e-300))
    return scale[:, None] * np.column_stack([-points[:, 1], points[:, 0]])


def sample_grid(size=GRID_SIZE, half_width=GRID_HALF_WIDTH):
    axis = np.linspace(-half_width, half_width, size)
    X, Y = np.meshgrid(axis, axis)
    return np.column_stack([X.ravel(), Y.ravel()])


def diagnostics(state: SimulationState, grid=None):
    """Area, perimeter, L1 distance to the unit disk, and ``max |u - u_B|`` on the sample lattice.

    With a symmetry set, area, perimeter and L1 distance refer to the full
    patch (all images).  ``reliable`` is False if a fundamental contour is not
    simple, in which case the area-based numbers are meaningless.
    """
    copies = state.copies
    grid = sample_grid() if grid is None else grid
    u = velocity_at(state, grid)
    dev = float(np.max(np.hypot(*(u - disk_velocity(grid)).T)))
    area = copies * sum(signed_area(c.nodes) for c in state.contours)
    per = copies * sum(perimeter(c.nodes) for c in state.contours)
    if len(state.contours) == 1:
        l1 = l1_distance_to_disk(state.contours[0].nodes, copies)
    else:
        l1 = float("nan")
    reliable = all(c.is_simple() for c in state.contours)
    return {"area": area, "perimeter": per, "l1_disk": l1, "max_vel_dev": dev, "reliable": reliable,
            "u_grid": u}


def _patch_region(state):
    from shapely.geometry import Polygon
    from shapely.ops import unary_union
    polys = [Polygon(rotate(c.nodes, 2.0 * math.pi * k / state.copies))
             for k in range(state.copies) for c in state.contours]
    return unary_union(polys)


def sup_weight_on_symmetric_difference(state, resolution=401):
    """``sup |1 - |x|^2|`` over ``Omega △ B`` sampled on a lattice.

    The supremum is 1 whenever the disk minus the patch reaches the origin
    (corner patches), which the lattice alone could miss; that case is
    added explicitly.
    """
    from shapely import contains_xy
    region = _patch_region(state)
    axis = np.linspace(-GRID_HALF_WIDTH, GRID_HALF_WIDTH, resolution)
    X, Y = np.meshgrid(axis, axis)
    inside = contains_xy(region, X, Y)
    r2 = X * X + Y * Y
    diff = inside != (r2 < 1.0)
    best = float(np.max(np.abs(1.0 - r2[diff]))) if np.any(diff) else 0.0
    if any(c.pinned for c in state.contours):
        best = max(best, 1.0)
    return best


def check_simple(state: SimulationState):
    """Raise :class:`SimulationHalt` if a boundary crosses itself or a rotated image."""
    from shapely.geometry import LinearRing
    for c in state.contours:
        ring = LinearRing(c.nodes)
        if not ring.is_simple:
            raise SimulationHalt(f"self-intersection at t={state.time:.6g}")
        if state.copies > 1:
            other = LinearRing(rotate(c.nodes, 2.0 * math.pi / state.copies))
            hit = ring.intersection(other)
            if not hit.is_empty:
                pts = np.asarray([g.coords[0] for g in getattr(hit, "geoms", [hit])])
                if hit.geom_type not in ("Point", "MultiPoint") or np.max(np.hypot(*pts.T)) > 1e-12:
                    raise SimulationHalt(f"boundary meets its rotated image at t={state.time:.6g}")


@dataclass
class TrajectoryRecord:
    """Sampled diagnostics of a contour run; ``columns[name][i]`` belongs to ``times[i]``."""
    names: tuple
    rows: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)  # (time, fundamental nodes)
    status: str = "ok"
    message: str = ""
    flags: list = field(default_factory=list)

    def append(self, row):
        if self.rows and not row["t"] > self.rows[-1]["t"]:
            raise ValueError("sample times must be strictly increasing")
        self.rows.append(row)

    @property
    def times(self):
        return self.column("t")

    def column(self, name):
        return np.array([r[name] for r in self.rows], dtype=float)

    def flag(self, text):
        if text not in self.flags:
            self.flags.append(text)


@dataclass(frozen=True)
class RunSettings:
    t_end: float
    dt: float = 2.5e-3
    sample_every: int = 40
    remesh_every: int = 20
    check_every: int = 100
    near_spacing: float = 2.5e-3
    far_spacing: float = 2e-2
    curvature_weight: float = 2e-2
    grading: float | None = None  # spacing alpha * r near the origin; None disables
    spacing_floor: float = 1e-6  # smallest graded spacing
    snapshot_every: int = 0  # in samples; 0 disables

    def __post_init__(self):
        if not self.t_end >= 0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        for name in ("sample_every", "remesh_every", "check_every"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @property
    def spacing(self):
        return radial_spacing(self.near_spacing, self.far_spacing)

    @property
    def grading_pair(self):
        return None if self.grading is None else (self.grading, self.spacing_floor)


def simulate(state, settings: RunSettings, sample, record: TrajectoryRecord):
    """Advance ``state`` to ``settings.t_end``, calling ``sample(state) -> row`` every ``sample_every`` steps.

    Remeshes every ``remesh_every`` steps and checks for boundary crossings
    every ``check_every`` steps; a halt stores status and message in the
    record and returns the last good state.
    """
    nsteps = int(round(settings.t_end / settings.dt))
    record.append(sample(state))
    if settings.snapshot_every:
        record.snapshots.append((state.time, state.contours[0].nodes.copy()))
    t0 = state.time
    try:
        for k in range(1, nsteps + 1):
            new = step(state, settings.dt)
            new = replace(new, time=t0 + k * settings.dt)
            if k % settings.remesh_every == 0:
                new = replace(new, contours=tuple(
                    remesh(c, settings.spacing, settings.curvature_weight,
                           grading=settings.grading_pair) for c in new.contours))
            if k % settings.check_every == 0:
                check_simple(new)
            state = new
            if k % settings.sample_every == 0 or k == nsteps:
                row = sample(state)
                record.append(row)
                i = len(record.rows) - 1
                if settings.snapshot_every and i % settings.snapshot_every == 0:
                    record.snapshots.append((state.time, state.contours[0].nodes.copy()))
    except SimulationHalt as exc:
        record.status, record.message = "halted", str(exc)
    return state


# ---------------------------------------------------------------------------
# spiral experiment
# ---------------------------------------------------------------------------

# resolution used for the spiral patch: graded towards the corner, where the
# curled structure moves inwards exponentially in time
SPIRAL_SETTINGS = RunSettings(t_end=40.0, dt=1e-2, sample_every=50, remesh_every=5, check_every=25,
                              grading=0.1, spacing_floor=1e-8)


@dataclass(frozen=True)
class SpiralParams:
    theta0: float = math.pi / 8
    delta: float = 0.05
    nu: float = 0.05
    smoothing: float | None = None
    fit_radius: float = 0.02
    r0: float = R0
    settings: RunSettings = SPIRAL_SETTINGS
    fit_spread: float | None = 0.01


SPIRAL_COLUMNS = ("t", "area", "perimeter", "corner_angle", "corner_bisector", "winding", "l1_disk",
                  "max_vel_dev", "tracked_radius", "angular_speed_margin", "crossing_margin", "nodes")


def corner_speed(theta0):
    """Rotation rate ``(1 - cos 4 theta0) / 4`` of an isolated four-fold sector corner."""
    return 0.25 * (1.0 - math.cos(4.0 * theta0))


def tracked_strand(contour):
    """Boundary nodes from the corner forward to the tracked material node."""
    p, t = contour.pinned[0], contour.tracked[0]
    n = len(contour)
    idx = [(p + k) % n for k in range((t - p) % n + 1)]
    return contour.nodes[idx]


def _safe_corner(contour, fit_radius, record, max_spread=None):
    try:
        return corner_angles(contour, fit_radius, max_spread=max_spread)[0]
    except ValueError as exc:
        record.flag(str(exc))
        nan = float("nan")
        return Corner(contour.pinned[0], nan, nan, nan, nan)


class _BisectorLift:
    """Keeps a sampled direction continuous in time."""

    def __init__(self):
        self.last = None

    def __call__(self, angle):
        if not math.isfinite(angle):
            return angle
        if self.last is not None:
            angle += 2.0 * math.pi * round((self.last - angle) / (2.0 * math.pi))
        self.last = angle
        return angle


def run_spiral_experiment(params: SpiralParams = SpiralParams()):
    """Evolve the spiral-generating patch and record winding, corner and stability diagnostics.

    Flags in the record: tracked node radius below ``r0``; angular speed
    margin below ``c1 / 2``; line-crossing or L1-stability inequality violated.
    """
    state = build_spiral_patch(params.theta0, params.delta, params.nu, params.smoothing,
                               spacing=params.settings.spacing,
                               curvature_weight=params.settings.curvature_weight,
                               grading=params.settings.grading_pair)
    c0 = corner_speed(params.theta0)
    c1 = 0.5 - c0
    lift = _BisectorLift()
    grid = sample_grid()
    r = np.hypot(grid[:, 0], grid[:, 1])
    annulus = (r >= params.r0) & (r <= 1.0)
    record = TrajectoryRecord(SPIRAL_COLUMNS)
    sv = {}

    def sample(s):
        c = s.contours[0]
        d = diagnostics(s, grid)
        corner = _safe_corner(c, params.fit_radius, record, params.fit_spread)
        strand = tracked_strand(c)
        wind = winding_number(strand)
        counts = [line_intersections(strand, phi) for phi in LINE_DIRECTIONS]
        crossings = min(counts) - math.floor(wind)
        u = d["u_grid"][annulus]
        pts = grid[annulus]
        omega = (pts[:, 0] * u[:, 1] - pts[:, 1] * u[:, 0]) / r[annulus] ** 2
        margin = float(np.min(omega)) - c0
        tracked_r = float(np.hypot(*strand[-1]))
        if not sv:
            sv["l1_0"] = d["l1_disk"]
            sv["sup"] = sup_weight_on_symmetric_difference(s)
        if d["l1_disk"] ** 2 > 4.0 * math.pi * sv["sup"] * sv["l1_0"] + 1e-2:
            record.flag("L1 stability inequality violated")
        if crossings < 0:
            record.flag("line-intersection inequality violated")
        if tracked_r < params.r0:
            record.flag(f"tracked node inside r0 = {params.r0:g}")
        if margin < 0.5 * c1:
            record.flag("angular speed below c1/2 in the annulus")
        if not d["reliable"]:
            record.flag("contour not simple: area and L1 unreliable")
        return {"t": s.time, "area": d["area"], "perimeter": d["perimeter"],
                "corner_angle": corner.opening, "corner_bisector": lift(corner.bisector),
                "winding": wind, "l1_disk": d["l1_disk"], "max_vel_dev": d["max_vel_dev"],
                "tracked_radius": tracked_r, "angular_speed_margin": margin, "crossing_margin": crossings,
                "nodes": len(c)}

    simulate(state, params.settings, sample, record)
    record.sv_bound = 4.0 * math.pi * sv["sup"] * sv["l1_0"]
    return record


def winding_fit(record: TrajectoryRecord):
    """Least-squares ``(slope, intercept, R^2)`` of winding number against time."""
    t, w = record.times, record.column("winding")
    slope, icpt = np.polyfit(t, w, 1)
    resid = w - (slope * t + icpt)
    ss = float(np.sum((w - w.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss if ss > 0 else 0.0
    return float(slope), float(icpt), r2


# ---------------------------------------------------------------------------
# corner persistence
# ---------------------------------------------------------------------------

CORNER_COLUMNS = ("t", "area", "corner_angle", "corner_bisector", "nodes")


def run_corner_experiment(theta0=math.pi / 8, radius=1.0, fit_radius=0.02,
                          settings: RunSettings = RunSettings(t_end=5.0)):
    """Evolve the four-fold sector patch and record the opening and bisector of its corner."""
    state = build_sector_patch(theta0, radius, spacing=settings.spacing,
                               curvature_weight=settings.curvature_weight, grading=settings.grading_pair)
    lift = _BisectorLift()
    record = TrajectoryRecord(CORNER_COLUMNS)

    def sample(s):
        c = s.contours[0]
        corner = _safe_corner(c, fit_radius, record)
        return {"t": s.time, "area": s.total_area(), "corner_angle": corner.opening,
                "corner_bisector": lift(corner.bisector), "nodes": len(c)}

    simulate(state, settings, sample, record)
    return record
