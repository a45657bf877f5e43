"""Arc-length / curvature node redistribution for patch contours.

The contour is cut at pinned (corner) nodes into open pieces; each piece is
interpolated by a cubic spline in cumulative chord length, and the stretches
between protected nodes are resampled so that every segment carries about
one unit of the target density

    rho(s) = min(1 + w |kappa(s)|, cap) / spacing(|x(s)|).

With a grading ``(alpha, floor)`` the density is raised to at least
``1 / max(alpha |x|, floor)``: near a corner at the origin the flow varies on
the scale ``|x|`` itself, so the spacing there shrinks geometrically.

A stretch whose segments already carry between ``band[0]`` and ``band[1]``
units of density, and whose node count is close to the integral of rho, is
left untouched; this makes remeshing idempotent on conforming contours.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline

from .geometry import signed_area
from .state import PatchContour

NEAR_SPACING = 5e-3
FAR_SPACING = 2e-2
DENSITY_CAP = 10.0
BAND = (0.5, 1.5)
SAMPLES_PER_SEGMENT = 8


def radial_spacing(near=NEAR_SPACING, far=FAR_SPACING, radius=1.0):
    """Spacing growing linearly from ``near`` at the origin to ``far`` at ``radius`` and beyond."""
    def h(r):
        return near + (far - near) * np.minimum(np.asarray(r) / radius, 1.0)
    return h


def _spacing_fn(spacing):
    if callable(spacing):
        return spacing
    value = float(spacing)
    if not value > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    return lambda r: np.full(np.shape(r), value)


class _Piece:
    """Spline through an ordered run of nodes, parametrised by chord length."""

    def __init__(self, pts, periodic):
        self.pts = pts
        d = np.hypot(*np.diff(pts, axis=0).T)
        self.s = np.concatenate([[0.0], np.cumsum(d)])
        if periodic:
            self.spline = CubicSpline(self.s, pts, bc_type="periodic")
        elif len(pts) >= 4:
            self.spline = CubicSpline(self.s, pts, bc_type="not-a-knot")
        else:
            self.spline = make_interp_spline(self.s, pts, k=min(3, len(pts) - 1))

    def density(self, s, spacing, weight, cap, grading=None):
        x = self.spline(s)
        r = np.hypot(x[:, 0], x[:, 1])
        if weight:
            d1 = self.spline(s, 1)
            d2 = self.spline(s, 2)
            sp = np.hypot(d1[:, 0], d1[:, 1])
            kappa = np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / np.maximum(sp, 1e-300) ** 3
            rho = np.minimum(1.0 + weight * kappa, cap) / spacing(r)
        else:
            rho = 1.0 / spacing(r)
        if grading:
            alpha, floor = grading
            rho = np.maximum(rho, 1.0 / np.maximum(alpha * r, floor))
        return rho


def _cumulative(piece, i, j, spacing, weight, cap, grading=None):
    """Fine samples of ``s`` on ``[s_i, s_j]`` and the running density integral."""
    fine = []
    for k in range(i, j):
        fine.append(np.linspace(piece.s[k], piece.s[k + 1], SAMPLES_PER_SEGMENT, endpoint=False))
    fine.append([piece.s[j]])
    s = np.concatenate(fine)
    rho = piece.density(s, spacing, weight, cap, grading)
    phi = np.concatenate([[0.0], np.cumsum(0.5 * (rho[1:] + rho[:-1]) * np.diff(s))])
    return s, phi


def _resample_stretch(piece, i, j, spacing, weight, cap, band, grading=None):
    """New interior nodes for the stretch between local nodes ``i < j``, or None if conforming."""
    s, phi = _cumulative(piece, i, j, spacing, weight, cap, grading)
    total = phi[-1]
    target = max(1, int(round(total)))
    per_seg = phi[::SAMPLES_PER_SEGMENT]
    carried = np.diff(per_seg)
    count = j - i
    if abs(count - total) <= max(1.0, 0.2 * total) and (
            count == 1 or (carried.min() >= band[0] and carried.max() <= band[1])):
        return None
    levels = total * np.arange(1, target) / target
    return piece.spline(np.interp(levels, phi, s))


def _turn(a, b, c):
    u, v = b - a, c - b
    return abs(math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1]))


def _arc_midpoint(a, b):
    """Midpoint of the circular arc from the origin to ``a`` on the circle through 0, ``a``, ``b``."""
    d = 2.0 * (a[0] * b[1] - a[1] * b[0])
    if abs(d) < 1e-300:
        return 0.5 * a
    a2, b2 = a @ a, b @ b
    c = np.array([(b[1] * a2 - a[1] * b2) / d, (a[0] * b2 - b[0] * a2) / d])
    m = 0.5 * a - c
    nm = math.hypot(*m)
    if nm == 0.0:
        return 0.5 * a
    p = c + m * (math.hypot(*c) / nm)
    # take the arc point on the same side of the chord as b is not
    q = c - m * (math.hypot(*c) / nm)
    side = lambda x: a[0] * x[1] - a[1] * x[0]
    return p if side(p) * side(b) <= 0 else q


def _ray_radii(ra, ray_step, r_max):
    """Radii below ``ra`` down to ``r_max``, spaced by ``ray_step(r)``, in increasing order."""
    out = []
    r = ra - ray_step(ra)
    while r > 0.5 * r_max:
        out.append(r)
        r -= ray_step(r)
    return out[::-1]


def _corner_pass(pts, tracked_local, ray_step, r_min, r_max, max_turn=0.2):
    """Refill or thin the rays next to the corner at each end of an open piece.

    Besides the radius limits, a corner segment whose strand turns by more
    than ``max_turn`` at the neighbour is split at the arc through the origin
    and the next two nodes, so a strand that curls near the corner keeps a
    resolution comparable with the rest of the piece.
    """
    pts = list(pts)
    tracked = set(tracked_local)

    def fix(seq, tr):
        # seq[0] is the corner, seq[1] its neighbour
        while len(seq) > 4 and np.hypot(*seq[1]) < r_min and 2 not in tr:
            del seq[1]
            tr = {t - 1 for t in tr}
        a = np.asarray(seq[1])
        ra = math.hypot(*a)
        if ra > r_max:
            radii = _ray_radii(ra, ray_step, r_max)
            seq[1:1] = [a * (q / ra) for q in radii]
            tr = {t + len(radii) for t in tr}
        for _ in range(4):
            a, b = np.asarray(seq[1]), np.asarray(seq[2])
            if math.hypot(*a) < 2.0 * r_min or _turn(np.zeros(2), a, b) <= max_turn:
                break
            seq.insert(1, _arc_midpoint(a, b))
            tr = {t + 1 for t in tr}
        return seq, tr

    n0 = len(pts)
    pts, tracked = fix(pts, tracked)
    rev = pts[::-1]
    rtr = {len(pts) - 1 - t for t in tracked}
    rev, rtr = fix(rev, rtr)
    pts = rev[::-1]
    tracked = {len(pts) - 1 - t for t in rtr}
    return np.array(pts), tracked, len(pts) != n0


def _restore_area(nodes, movable, area0, guard=0.0):
    """Offset movable nodes along vertex normals until the enclosed area is ``area0``.

    With ``guard > 0`` the offset vanishes inside ``r < guard / 4`` and ramps
    quadratically up to full strength at ``r = guard``, so nodes near a corner
    at the origin keep their polar angle exactly.
    """
    if not np.any(movable):
        return nodes
    weight = np.ones(len(nodes))
    if guard > 0:
        r = np.hypot(nodes[:, 0], nodes[:, 1])
        weight = np.clip((r - 0.25 * guard) / (0.75 * guard), 0.0, 1.0) ** 2
    for _ in range(4):
        nxt, prv = np.roll(nodes, -1, axis=0), np.roll(nodes, 1, axis=0)
        t = nxt - prv
        tl = np.hypot(t[:, 0], t[:, 1])
        normal = np.column_stack([t[:, 1], -t[:, 0]]) / np.maximum(tl, 1e-300)[:, None]
        rate = 0.5 * np.sum((weight * tl)[movable])
        err = signed_area(nodes) - area0
        if abs(err) <= 1e-15 * abs(area0) or rate == 0.0:
            break
        nodes = nodes.copy()
        nodes[movable] -= (err / rate) * (weight[:, None] * normal)[movable]
    return nodes


def remesh(contour: PatchContour, spacing=None, curvature_weight=0.0, *, cap=DENSITY_CAP,
           band=BAND, corner_min=None, corner_max=None, corner_guard=0.2, grading=None):
    """Redistribute the nodes of ``contour``.

    Parameters
    ----------
    spacing : float or callable ``r -> spacing``; default :func:`radial_spacing`
    curvature_weight : ``w`` in the density boost ``1 + w |kappa|`` (capped at ``cap``)
    corner_min, corner_max : radii below/above which the node next to a
        pinned corner is dropped / supplemented by nodes on the straight ray
        (defaults: half and twice the spacing at the origin)
    corner_guard : radius inside which the area-restoring offset is tapered
        to zero near pinned corners
    grading : ``(alpha, floor)`` for geometric refinement towards the origin
        (see module notes); the corner limits then default to ``floor / 2``
        and ``2 floor`` and rays are refilled at the graded spacing

    Pinned nodes, their two neighbours and tracked nodes are kept exactly;
    the enclosed area is restored to round-off after resampling.
    """
    if len(contour) < 3:
        raise ValueError("a contour needs at least 3 nodes")
    if curvature_weight < 0 or cap < 1:
        raise ValueError("curvature_weight must be >= 0 and cap >= 1")
    if grading is not None and not (grading[0] > 0 and grading[1] > 0):
        raise ValueError(f"grading needs alpha > 0 and floor > 0, got {grading}")
    h = _spacing_fn(spacing if spacing is not None else radial_spacing())
    h0 = float(h(np.array([0.0]))[0])
    ray_step = lambda r: h0
    if grading:
        h0 = min(h0, grading[1])
        ray_step = lambda r: min(float(h(np.array([r]))[0]), max(grading[0] * r, grading[1]))
    r_min = 0.5 * h0 if corner_min is None else corner_min
    r_max = 2.0 * h0 if corner_max is None else corner_max

    nodes = contour.nodes
    n = len(nodes)
    area0 = signed_area(nodes)
    pinned = list(contour.pinned)
    tracked = list(contour.tracked)

    # cut into pieces: lists of (global index or None for new nodes)
    if pinned:
        cuts = pinned
    else:
        cuts = [tracked[0] if tracked else 0]
    out_nodes, out_tracked, out_pinned, movable = [], {}, [], []
    changed = False
    for c_idx, start in enumerate(cuts):
        end = cuts[(c_idx + 1) % len(cuts)]
        length = (end - start) % n or n
        idx = [(start + k) % n for k in range(length + 1)]
        pts = nodes[idx]
        local_tracked = {k: tracked.index(g) for k, g in enumerate(idx) if g in tracked and 0 <= k < length}
        if pinned:
            pts, tr_set, moved = _corner_pass(pts, set(local_tracked), ray_step, r_min, r_max)
            changed |= moved
            # re-key tracked after insertions/deletions: order is preserved
            order = sorted(local_tracked.items())
            local_tracked = {k: v for k, (_, v) in zip(sorted(tr_set), order)}
            protect = {0, 1, len(pts) - 2, len(pts) - 1}
        else:
            protect = {0, len(pts) - 1}
        protect |= set(local_tracked)
        piece = _Piece(pts, periodic=not pinned)
        keys = sorted(p for p in protect if 0 <= p < len(pts))
        new_pts = [pts[0]]
        new_mov = [False]
        new_keys = {0: 0}
        for a, b in zip(keys[:-1], keys[1:]):
            corner_ray = pinned and (a == 0 or b == len(pts) - 1)
            fresh = None if corner_ray else _resample_stretch(piece, a, b, h, curvature_weight, cap, band, grading)
            if fresh is None:
                new_pts.extend(pts[a + 1:b + 1])
                new_mov.extend([False] * (b - a))
            else:
                changed = True
                new_pts.extend(fresh)
                new_mov.extend([True] * len(fresh))
                new_pts.append(pts[b])
                new_mov.append(False)
            new_keys[b] = len(new_pts) - 1
        # drop the closing node (it starts the next piece)
        base = len(out_nodes)
        if pinned:
            out_pinned.append(base)
        for k, slot in local_tracked.items():
            out_tracked[slot] = base + new_keys[k]
        out_nodes.extend(new_pts[:-1])
        movable.extend(new_mov[:-1])

    if not changed:
        return contour
    new = np.array(out_nodes)
    if pinned:
        new[out_pinned] = 0.0
    new = _restore_area(new, np.array(movable, dtype=bool), area0, corner_guard if pinned else 0.0)
    return PatchContour(new, pinned=tuple(out_pinned), strength=contour.strength,
                        tracked=tuple(out_tracked[i] for i in range(len(tracked))),
                        closed=contour.closed)
