"""Rotating (relative-equilibrium) sector configurations for four-fold patches."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .angles import AngularProfile, SectorConfiguration, Sector, _green_antiderivative, kernel_H

ROTATING_TOL = 1e-12


def stationarity_residual(config: SectorConfiguration):
    """Right-hand sides of the stationary two-sector, four-fold system.

    Uses the leading gap ``gamma_{3/2}`` as the single gap angle.
    """
    if config.m != 4 or config.n != 2:
        raise ValueError(f"need m = 4 and N = 2, got m = {config.m}, N = {config.n}")
    z1, z2 = config.zetas
    a1, a2 = config.strengths
    g = config.gaps[0]
    c = math.sin(z1) * math.sin(z2) * math.cos(2.0 * g + z1 + z2)
    return np.array([
        -a2 * c,
        a1 * c,
        math.sin(g) * (a1 * math.sin(z1) * math.cos(g + z1) - a2 * math.sin(z2) * math.cos(g + z2)),
    ])


def rotating_family(xi):
    """Member ``xi`` of the explicit one-parameter family of rotating states."""
    if not 0.0 <= xi <= math.pi / 8:
        raise ValueError(f"xi must lie in [0, pi/8], got {xi}")
    q = math.pi / 8
    z1, z2, g = q + xi, q - xi, q
    a1 = math.sin(q - xi) * math.cos(2 * q - xi)
    a2 = math.sin(q + xi) * math.cos(2 * q + xi)
    return SectorConfiguration(4, (Sector(0.0, z1, a1), Sector(z1 + g, z2, a2)))


def jump_points(profile: AngularProfile, tol=1e-13):
    """Angles in ``[0, P)`` where the profile jumps."""
    p = profile.period
    events = []
    for lo, hi, a in profile.pieces:
        if hi > lo and a != 0.0:
            events.append((lo % p, a))
            events.append((hi % p, -a))
    if not events:
        return np.array([])
    events.sort()
    pos, jumps = [events[0][0]], [events[0][1]]
    for x, a in events[1:]:
        if x - pos[-1] < tol:
            jumps[-1] += a
        else:
            pos.append(x)
            jumps.append(a)
    if len(pos) > 1 and pos[0] + p - pos[-1] < tol:
        jumps[0] += jumps.pop()
        pos.pop()
    pos, jumps = np.array(pos), np.array(jumps)
    scale = max(abs(a) for *_, a in profile.pieces)
    return pos[np.abs(jumps) > 1e-12 * scale]


def rigid_rotation_residual(profile: AngularProfile):
    """Spread of the angular speed over the profile's jump points.

    Every vorticity discontinuity must turn at the same rate for the patch to
    rotate rigidly, so a zero spread (up to round-off) marks a rotating state.
    """
    if not profile.pieces:
        raise ValueError("empty profile")
    pts = jump_points(profile)
    if pts.size == 0:
        return 0.0
    h = kernel_H(profile, pts)
    return float(np.max(h) - np.min(h))


def profile_mean(profile: AngularProfile):
    """Integral of ``h`` over the full circle (all ``m`` copies)."""
    return profile.m * sum(a * (hi - lo) for lo, hi, a in profile.pieces)


def family_profile(xi, background=0.0):
    """Vorticity profile of :func:`rotating_family`, optionally over a constant background."""
    cfg = rotating_family(xi)
    p = cfg.period
    pieces, cursor = [], cfg.betas[0]
    for s in cfg.sectors:
        if s.beta > cursor and background:
            pieces.append((cursor, s.beta, background))
        if s.zeta > 0:
            pieces.append((s.beta, s.beta + s.zeta, s.strength + background))
        cursor = s.beta + s.zeta
    end = cfg.betas[0] + p
    if end > cursor and background:
        pieces.append((cursor, end, background))
    return AngularProfile(4, tuple(pieces))


def zero_mean_rotating(xi):
    """Rotating member of the family shifted by a constant so its integral vanishes.

    A constant vorticity adds the same angular speed at every jump point, so
    the shift keeps the patch rotating.  Returns ``(profile, rotation_speed)``.
    """
    base = family_profile(xi)
    shift = -profile_mean(base) / (2.0 * math.pi)
    prof = family_profile(xi, background=shift)
    pts = jump_points(prof)
    return prof, float(2.0 * kernel_H(prof, pts[0])) if pts.size else 0.0


@dataclass
class SweepReport:
    step: float
    n_configs: int
    min_residual: float
    argmin: tuple
    single_interval_max: float
    rows: np.ndarray  # (b1, a1, b2, a2, residual)


def sweep_two_interval(step, keep_rows=False):
    """Brute-force every two-interval support with grid endpoints in ``[-pi/8, pi/8]``.

    Two intervals count as genuinely separate when at least one grid cell lies
    between them.  The minimum residual is taken over those; merged
    (touching) pairs are swept as well and their largest residual reported in
    ``single_interval_max``.  Ties in the minimum go to the lexicographically
    first endpoint tuple.
    """
    span = math.pi / 4
    n = span / step
    if abs(n - round(n)) > 1e-9 or round(n) < 3:
        raise ValueError(f"grid step must divide pi/4, got {step}")
    n = int(round(n))
    grid = -math.pi / 8 + step * np.arange(n + 1)
    F = _green_antiderivative(4, grid[:, None] - grid[None, :])

    idx = np.array(list(combinations(range(n + 1), 4)))
    b1, a1, b2, a2 = idx.T
    ends = (b1, a1, b2, a2)
    H = np.stack([F[e, b1] - F[e, a1] + F[e, b2] - F[e, a2] for e in ends])
    res = H.max(axis=0) - H.min(axis=0)
    k = int(np.argmin(res))  # first minimum in lexicographic order

    tri = np.array(list(combinations(range(n + 1), 3)))
    b, c, a = tri.T
    Ht = np.stack([F[e, b] - F[e, a] for e in (b, a)])
    merged = float(np.max(Ht.max(axis=0) - Ht.min(axis=0)))

    rows = np.column_stack([grid[idx], res]) if keep_rows else np.empty((0, 5))
    return SweepReport(step, len(res), float(res[k]), tuple(grid[idx[k]]), merged, rows)


def straddling_pair(eps):
    """Unit intervals of half-width ``eps`` centred at ``-pi/8`` and ``pi/8``.

    Once the support may reach past ``[-pi/8, pi/8]`` this pair rotates
    rigidly, so the separation condition in the sweep cannot be dropped.
    """
    if not 0.0 < eps < math.pi / 8:
        raise ValueError(f"eps must lie in (0, pi/8), got {eps}")
    q = math.pi / 8
    return AngularProfile(4, ((-q - eps, -q + eps, 1.0), (q - eps, q + eps, 1.0)))
