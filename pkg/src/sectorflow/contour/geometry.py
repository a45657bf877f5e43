"""Polygon and polyline measurements used by the contour simulator."""
from __future__ import annotations

import math

import numpy as np


def signed_area(nodes):
    """Shoelace area; positive for counterclockwise polygons."""
    x, y = nodes[:, 0], nodes[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def perimeter(nodes, closed=True):
    d = np.diff(np.vstack([nodes, nodes[:1]]) if closed else nodes, axis=0)
    return float(np.sum(np.hypot(d[:, 0], d[:, 1])))


def rotate(points, angle):
    c, s = math.cos(angle), math.sin(angle)
    return points @ np.array([[c, s], [-s, c]])


def disk_intersection_area(nodes, radius=1.0):
    """Exact signed area of ``polygon ∩ B(0, radius)``.

    Sums, edge by edge, the signed area of the triangle ``(0, p, q)`` clipped
    to the disk: pieces of the edge inside the disk contribute a triangle,
    pieces outside contribute the circular sector they subtend.
    """
    p = nodes
    q = np.roll(nodes, -1, axis=0)
    d = q - p
    a = np.einsum("ij,ij->i", d, d)
    b = 2.0 * np.einsum("ij,ij->i", p, d)
    c = np.einsum("ij,ij->i", p, p) - radius * radius
    disc = b * b - 4.0 * a * c
    safe_a = np.where(a > 0, a, 1.0)
    root = np.sqrt(np.maximum(disc, 0.0))
    t1 = np.where(disc > 0, (-b - root) / (2 * safe_a), 0.0)
    t2 = np.where(disc > 0, (-b + root) / (2 * safe_a), 0.0)
    t1 = np.clip(t1, 0.0, 1.0)
    t2 = np.clip(t2, 0.0, 1.0)
    total = 0.0
    for lo, hi in ((np.zeros_like(t1), t1), (t1, t2), (t2, np.ones_like(t2))):
        u = p + lo[:, None] * d
        v = p + hi[:, None] * d
        mid = 0.5 * (u + v)
        inside = np.einsum("ij,ij->i", mid, mid) <= radius * radius
        cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
        dot = np.einsum("ij,ij->i", u, v)
        tri = 0.5 * cross
        sector = 0.5 * radius * radius * np.arctan2(cross, dot)
        piece = np.where(inside, tri, sector)
        total += float(np.sum(np.where(hi > lo, piece, 0.0)))
    return total


def l1_distance_to_disk(nodes, copies=1, radius=1.0):
    """``|Omega △ B|`` for the union of ``copies`` rotated images of the polygon."""
    area = copies * abs(signed_area(nodes))
    inter = copies * abs(disk_intersection_area(nodes, radius))
    return area + math.pi * radius * radius - 2.0 * inter


def discrete_curvature(nodes, closed=True):
    """Menger curvature at every node (inverse circumradius of neighbour triples)."""
    if closed:
        a, b, c = np.roll(nodes, 1, axis=0), nodes, np.roll(nodes, -1, axis=0)
    else:
        a, b, c = nodes[:-2], nodes[1:-1], nodes[2:]
    ab = np.hypot(*(b - a).T)
    bc = np.hypot(*(c - b).T)
    ca = np.hypot(*(a - c).T)
    cross = (b - a)[:, 0] * (c - a)[:, 1] - (b - a)[:, 1] * (c - a)[:, 0]
    den = ab * bc * ca
    k = np.where(den > 0, 2.0 * np.abs(cross) / np.where(den > 0, den, 1.0), 0.0)
    if not closed:
        k = np.concatenate([[k[0] if len(k) else 0.0], k, [k[-1] if len(k) else 0.0]])
    return k


def orientation_angle(nodes):
    """Principal-axis angle of a polygonal region from its second moments, in (-pi/2, pi/2]."""
    x, y = nodes[:, 0], nodes[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cr = x * yn - xn * y
    A = 0.5 * cr.sum()
    cx = ((x + xn) * cr).sum() / (6 * A)
    cy = ((y + yn) * cr).sum() / (6 * A)
    ixx = ((x * x + x * xn + xn * xn) * cr).sum() / 12 - A * cx * cx
    iyy = ((y * y + y * yn + yn * yn) * cr).sum() / 12 - A * cy * cy
    ixy = ((x * yn + 2 * x * y + 2 * xn * yn + xn * y) * cr).sum() / 24 - A * cx * cy
    return 0.5 * math.atan2(2 * ixy, ixx - iyy)


# ---------------------------------------------------------------------------
# winding and line crossings of curves issuing from the origin
# ---------------------------------------------------------------------------

def _dedupe(curve):
    curve = np.asarray(curve, dtype=float)
    keep = np.ones(len(curve), dtype=bool)
    keep[1:] = np.any(np.diff(curve, axis=0) != 0.0, axis=1)
    return curve[keep]


def lifted_angles(curve):
    """Continuous polar angle along a polyline avoiding the origin.

    Per-step increments are wrapped into ``(-pi, pi]``; the node spacing has
    to keep the true increments below ``pi``.
    """
    th = np.arctan2(curve[:, 1], curve[:, 0])
    inc = np.diff(th)
    inc = inc - 2.0 * math.pi * np.ceil((inc - math.pi) / (2.0 * math.pi))
    return np.concatenate([[th[0]], th[0] + np.cumsum(inc)])


def angle_swept(curve):
    """Net polar angle swept by a polyline not through the origin, in turns."""
    curve = _dedupe(curve)
    if np.any(np.all(curve == 0.0, axis=1)):
        raise ValueError("curve passes through the origin")
    th = lifted_angles(curve)
    return float((th[-1] - th[0]) / (2.0 * math.pi))


def tangent_angle_at_origin(curve):
    """Direction of the curve leaving the origin.

    Linear extrapolation to radius zero of the lifted angle of the first two
    nodes after the origin; exact for straight rays and Archimedean spirals.
    """
    th = lifted_angles(curve[1:3])
    r = np.hypot(curve[1:3, 0], curve[1:3, 1])
    if len(th) < 2 or r[1] - r[0] <= 1e-3 * r[1]:
        return float(th[0])
    slope = (th[1] - th[0]) / (r[1] - r[0])
    corr = -slope * r[0]
    if abs(corr) > abs(th[1] - th[0]):
        corr = math.copysign(abs(th[1] - th[0]), corr)
    return float(th[0] + corr)


def winding_number(curve):
    """Winding number about the origin of a polyline that starts there.

    ``(final lifted angle - tangent angle at the origin) / 2 pi``.
    """
    curve = _dedupe(curve)
    if len(curve) < 2:
        raise ValueError("curve needs at least two distinct nodes")
    if np.any(curve[0] != 0.0):
        raise ValueError("curve must start at the origin")
    if np.any(np.all(curve[1:] == 0.0, axis=1)):
        raise ValueError("curve revisits the origin")
    th = lifted_angles(curve[1:])
    t0 = tangent_angle_at_origin(curve)
    # align the tangent branch with the lift of the first node
    t0 += 2.0 * math.pi * round((th[0] - t0) / (2.0 * math.pi))
    return float((th[-1] - t0) / (2.0 * math.pi))


def line_intersections(curve, direction):
    """Transversal crossings of the line through the origin with the given direction angle.

    Counts sign changes of the signed distance along the polyline, ignoring
    the starting node when it lies on the line.  A run of nodes exactly on the
    line counts once if the sides before and after differ.
    """
    curve = _dedupe(curve)
    n = np.array([-math.sin(direction), math.cos(direction)])
    s = curve @ n
    if np.all(curve[0] == 0.0):
        s = s[1:]
    sign = np.sign(s)
    sign = sign[sign != 0]
    return int(np.count_nonzero(sign[1:] != sign[:-1]))


def fit_ray_direction(points):
    """Least-squares line through the origin; returns the outward direction angle."""
    M = points.T @ points
    w, v = np.linalg.eigh(M)
    d = v[:, -1]
    if np.sum(points @ d) < 0:
        d = -d
    return math.atan2(d[1], d[0])
