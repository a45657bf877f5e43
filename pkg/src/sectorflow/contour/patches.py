"""Initial patches with a corner at the origin: exact sectors and the spiral-generating patch."""
from __future__ import annotations

import math

import numpy as np

from .remesh import remesh
from .state import PatchContour, SimulationState

FINE = 2e-4  # spacing of the dense exact polyline handed to the remesher


def _seg(p, q, include_start=False):
    n = max(2, int(math.ceil(np.hypot(*(q - p)) / FINE)) + 1)
    pts = p[None] + np.linspace(0.0, 1.0, n)[:, None] * (q - p)[None]
    return pts if include_start else pts[1:]


def _arc(center, radius, a0, a1):
    """Points on a circular arc from angle ``a0`` to ``a1`` (either direction), start excluded."""
    n = max(2, int(math.ceil(abs(a1 - a0) * radius / FINE)) + 1)
    a = np.linspace(a0, a1, n)[1:]
    return center[None] + radius * np.column_stack([np.cos(a), np.sin(a)])


def _unit(v):
    return v / np.hypot(*v)


def _line_line_fillet(prev, vertex, nxt, radius):
    """Tangent points and arc replacing the corner ``prev -> vertex -> nxt``."""
    d1, d2 = _unit(vertex - prev), _unit(nxt - vertex)
    turn = math.atan2(d1[0] * d2[1] - d1[1] * d2[0], d1 @ d2)
    t = radius * math.tan(abs(turn) / 2.0)
    p1, p2 = vertex - t * d1, vertex + t * d2
    side = 1.0 if turn > 0 else -1.0  # left turn: centre on the left
    normal = side * np.array([-d1[1], d1[0]])
    c = p1 + radius * normal
    a0 = math.atan2(*(p1 - c)[::-1])
    return p1, c, a0, a0 + turn, p2


def _line_circle_fillet(a, b, radius, into_circle):
    """Fillet of ``radius`` between segment ``a -> b`` (``b`` on the unit circle) and the unit circle.

    ``into_circle`` is True when the contour runs along the segment and turns
    left onto the circle (counterclockwise), False for the reverse passage.
    Returns ``(line point, centre, circle point)``.
    """
    d = _unit(b - a)
    n = np.array([-d[1], d[0]]) if into_circle else np.array([d[1], -d[0]])
    # centre c = a + u d + radius n with |c| = 1 - radius
    base = a + radius * n
    bb = 2.0 * (base @ d)
    cc = base @ base - (1.0 - radius) ** 2
    u = (-bb + math.sqrt(bb * bb - 4.0 * cc)) / 2.0
    c = base + u * d
    return a + u * d, c, c / np.hypot(*c)


def _check_smoothing(smoothing, delta):
    if not 0.0 < smoothing < delta / 4.0:
        raise ValueError(f"smoothing radius must lie in (0, delta/4) = (0, {delta / 4:g}), got {smoothing}")


def _finish(dense, tracked_point, spacing, curvature_weight, grading=None):
    tracked = ()
    if tracked_point is not None:
        tracked = (int(np.argmin(np.hypot(*(dense - tracked_point).T))),)
    c = PatchContour(dense, pinned=(0,), tracked=tracked)
    return remesh(c, spacing, curvature_weight, grading=grading)


def build_spiral_patch(theta0=math.pi / 8, delta=0.05, nu=0.05, smoothing=None, *,
                       spacing=None, curvature_weight=2e-2, grading=None):
    """Four-fold patch whose fundamental piece is a sector near the origin and a cap near the unit circle.

    Fundamental boundary, counterclockwise: ``O -> A- -> B- -> arc -> B+ -> A+ -> O``
    with ``A+- = delta e^{+-i theta0}`` and ``B+- = e^{+-i (pi/4 - nu)}``; the
    corners at ``A+-`` and ``B+-`` are rounded by circular arcs of radius
    ``smoothing`` (default ``delta / 8``).  The node at ``(1, 0)`` is tracked.
    ``spacing``, ``curvature_weight`` and ``grading`` are passed to :func:`remesh`.
    """
    if smoothing is None:
        smoothing = delta / 8.0
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not 0.0 < nu < math.pi / 4:
        raise ValueError(f"nu must lie in (0, pi/4), got {nu}")
    if not 0.0 < theta0 < math.pi / 4 - nu:
        raise ValueError(f"theta0 must lie in (0, pi/4 - nu) = (0, {math.pi / 4 - nu:g}), got {theta0}")
    _check_smoothing(smoothing, delta)

    O = np.zeros(2)
    phi = math.pi / 4 - nu
    Am = delta * np.array([math.cos(theta0), -math.sin(theta0)])
    Bm = np.array([math.cos(phi), -math.sin(phi)])
    p1, c, a0, a1, p2 = _line_line_fillet(O, Am, Bm, smoothing)
    q1, c2, q2 = _line_circle_fillet(p2, Bm, smoothing, into_circle=True)
    lower = [O[None], _seg(O, p1), _arc(c, smoothing, a0, a1), _seg(p2, q1),
             _arc(c2, smoothing, _angle(q1 - c2), _angle(q2 - c2)),
             _arc(O, 1.0, _angle(q2), 0.0)]
    contour = _finish(_close_symmetric(np.vstack(lower)), np.array([1.0, 0.0]), spacing, curvature_weight,
                      grading)
    return SimulationState((contour,), 0.0, 4)


def _angle(v):
    return math.atan2(v[1], v[0])


def _close_symmetric(lower):
    """Complete a path from the origin to the positive x-axis by its mirror image."""
    upper = lower[-2:0:-1] * np.array([1.0, -1.0])
    return np.vstack([lower, upper])


def build_sector_patch(theta0=math.pi / 8, radius=1.0, smoothing=None, m=4, *,
                       spacing=None, curvature_weight=2e-2, grading=None):
    """``m``-fold patch of sectors ``|arg x| < theta0``, ``|x| < radius`` with rounded outer corners."""
    if not 0.0 < theta0 < math.pi / m:
        raise ValueError(f"theta0 must lie in (0, pi/{m}), got {theta0}")
    if smoothing is None:
        smoothing = radius / 20.0
    if not 0.0 < smoothing < radius * math.sin(theta0) / 2.0:
        raise ValueError(f"smoothing radius {smoothing} too large for the sector")
    O = np.zeros(2)
    Bm = np.array([math.cos(theta0), -math.sin(theta0)])
    q1, c, q2 = _line_circle_fillet(O, Bm, smoothing / radius, into_circle=True)
    lower = radius * np.vstack([O[None], _seg(O, q1),
                                _arc(c, smoothing / radius, _angle(q1 - c), _angle(q2 - c)),
                                _arc(O, 1.0, _angle(q2), 0.0)])
    contour = _finish(_close_symmetric(lower), None, spacing, curvature_weight, grading)
    return SimulationState((contour,), 0.0, m)

