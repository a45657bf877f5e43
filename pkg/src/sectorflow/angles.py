"""Corner-angle dynamics of m-fold symmetric sector patches.

State of the angle system: for ``N`` sectors per fundamental domain of an
``m``-fold symmetric patch, sector ``i`` starts at the ray ``beta_i`` and has
opening ``zeta_i``.  Gaps ``gamma_{i+1/2} = beta_{i+1} - beta_i - zeta_i``
separate consecutive sectors and the last gap wraps around by ``2 pi / m``.

The integrated state vector is ``(beta_1, zeta_1..zeta_N, gamma_1..gamma_{N-1})``;
the trailing gap always comes from the closure constraint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ZERO_CLAMP = 1e-12
_GAP_TOL = 1e-12


@dataclass(frozen=True)
class Sector:
    beta: float
    zeta: float
    strength: float = 1.0


@dataclass(frozen=True)
class NormalizationConstants:
    """Multipliers of the angle ODE right-hand sides.

    The default gauge ``(1, 1, 0)`` is the time-rescaled normalisation.  For
    ``m = 4`` it coincides with physical time for the opening angles.
    """

    c: float = 1.0
    c_prime: float = 1.0
    c_double_prime: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"C_m must be positive, got {self.c}")
        if self.c_prime < 0 or self.c_double_prime < 0:
            raise ValueError("C_m' and C_m'' must be nonnegative")

    def to_dict(self):
        return {"c": self.c, "c_prime": self.c_prime, "c_double_prime": self.c_double_prime}


@dataclass(frozen=True)
class SectorConfiguration:
    """Angles and strengths of the sectors in one fundamental domain."""

    m: int
    sectors: tuple[Sector, ...]

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 3:
            raise ValueError(f"fold symmetry m must be an integer >= 3, got {self.m}")
        object.__setattr__(self, "sectors", tuple(self.sectors))
        if not self.sectors:
            raise ValueError("configuration needs at least one sector")
        for s in self.sectors:
            if not all(math.isfinite(v) for v in (s.beta, s.zeta, s.strength)):
                raise ValueError("sector angles and strengths must be finite")
            if s.zeta < -_GAP_TOL:
                raise ValueError(f"negative sector width {s.zeta}")
        gaps = self.gaps
        if np.any(gaps < -_GAP_TOL):
            raise ValueError(f"sectors overlap or exceed the fundamental domain: gaps={gaps}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_angles(cls, m, zetas, gaps, beta1=0.0, strengths=None):
        """Build from widths and the ``N - 1`` (or ``N``) leading gaps."""
        zetas = [float(z) for z in zetas]
        n = len(zetas)
        gaps = list(gaps)[: n - 1]
        if len(gaps) != n - 1:
            raise ValueError(f"need {n - 1} gaps for {n} sectors")
        strengths = [1.0] * n if strengths is None else [float(a) for a in strengths]
        betas = [float(beta1)]
        for i in range(n - 1):
            betas.append(betas[-1] + zetas[i] + float(gaps[i]))
        return cls(int(m), tuple(Sector(b, z, a) for b, z, a in zip(betas, zetas, strengths)))

    @classmethod
    def from_state(cls, m, y, strengths=None):
        y = np.asarray(y, dtype=float)
        n = (len(y) + 1) // 2
        return cls.from_angles(m, y[1:n + 1], y[n + 1:], beta1=y[0], strengths=strengths)

    # -- derived quantities -----------------------------------------------
    @property
    def n(self):
        return len(self.sectors)

    @property
    def period(self):
        return 2.0 * math.pi / self.m

    @property
    def betas(self):
        return np.array([s.beta for s in self.sectors])

    @property
    def zetas(self):
        return np.array([s.zeta for s in self.sectors])

    @property
    def strengths(self):
        return np.array([s.strength for s in self.sectors])

    @property
    def gaps(self):
        """All ``N`` gaps; the last one wraps around the fundamental domain."""
        b, z = self.betas, self.zetas
        inner = b[1:] - b[:-1] - z[:-1]
        trailing = self.period - z.sum() - inner.sum()
        return np.append(inner, trailing)

    def state(self):
        return np.concatenate([[self.sectors[0].beta], self.zetas, self.gaps[:-1]])

    def profile(self):
        """Piecewise-constant vorticity profile of the exact sector patch."""
        return AngularProfile(self.m, tuple((s.beta, s.beta + s.zeta, s.strength)
                                            for s in self.sectors if s.zeta > 0))

    # -- serialisation ----------------------------------------------------
    def to_dict(self):
        return {"m": self.m,
                "sectors": [{"beta": s.beta, "zeta": s.zeta, "strength": s.strength}
                            for s in self.sectors]}

    @classmethod
    def from_dict(cls, d):
        try:
            sectors = tuple(Sector(float(s["beta"]), float(s["zeta"]), float(s.get("strength", 1.0)))
                            for s in d["sectors"])
            return cls(d["m"], sectors)
        except KeyError as exc:
            raise ValueError(f"missing field {exc} in sector configuration") from None


@dataclass(frozen=True)
class AngularProfile:
    """Vorticity ``h(theta)`` constant on finitely many arcs, ``2 pi / m`` periodic.

    ``pieces`` holds ``(theta_lo, theta_hi, amplitude)`` triples; outside the
    pieces ``h`` vanishes.
    """

    m: int
    pieces: tuple[tuple[float, float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 3:
            raise ValueError(f"fold symmetry m must be an integer >= 3, got {self.m}")
        pieces = tuple((float(lo), float(hi), float(a)) for lo, hi, a in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        period = self.period
        arcs = []
        for lo, hi, a in pieces:
            if not all(math.isfinite(v) for v in (lo, hi, a)):
                raise ValueError("profile pieces must be finite")
            if hi < lo or hi - lo > period + 1e-14:
                raise ValueError(f"invalid interval [{lo}, {hi})")
            start = lo % period
            end = start + (hi - lo)
            if end > period:
                arcs += [(start, period), (0.0, end - period)]
            else:
                arcs.append((start, end))
        arcs.sort()
        for (_, e0), (s1, _) in zip(arcs, arcs[1:]):
            if s1 < e0 - 1e-13:
                raise ValueError("profile pieces overlap")

    @property
    def period(self):
        return 2.0 * math.pi / self.m

    @classmethod
    def constant(cls, m, amplitude=1.0):
        p = 2.0 * math.pi / m
        return cls(m, ((-p / 2, p / 2, amplitude),))

    def shifted(self, angle):
        return AngularProfile(self.m, tuple((lo + angle, hi + angle, a) for lo, hi, a in self.pieces))

    def scaled(self, factor):
        return AngularProfile(self.m, tuple((lo, hi, a * factor) for lo, hi, a in self.pieces))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for lo, hi, a in self.pieces:
            out = out + a * (((theta - lo) % self.period) < (hi - lo))
        return out


# ---------------------------------------------------------------------------
# the angular stream function
# ---------------------------------------------------------------------------

def green(m, s):
    """Periodic Green's function of ``H'' + 4 H`` on the circle of length ``2 pi / m``.

    ``G(s) = cos(2|s| - P) / (4 sin P)`` for ``|s| <= P/2``, ``P = 2 pi / m``.
    For ``m = 4`` this is ``|sin(2 s)| / 4``.
    """
    p = 2.0 * math.pi / m
    r = np.abs((np.asarray(s, dtype=float) + p / 2) % p - p / 2)
    return np.cos(2.0 * r - p) / (4.0 * math.sin(p))


def _green_antiderivative(m, x):
    # F(x) = int_0^x G; G integrates to 1/4 per period
    p = 2.0 * math.pi / m
    x = np.asarray(x, dtype=float)
    k = np.floor((x + p / 2) / p)
    r = x - k * p
    f0 = np.sign(r) * (np.sin(2.0 * np.abs(r) - p) + math.sin(p)) / (8.0 * math.sin(p))
    return 0.25 * k + f0


def kernel_H(profile: AngularProfile, theta):
    """Periodic solution ``H`` of ``4 H + H'' = h`` at ``theta``.

    Exact for piecewise-constant ``h``: each piece contributes the difference
    of the Green's function antiderivative at its two ends.  A piece spanning
    a whole period is the constant solution ``a / 4``, added without roundoff.
    """
    theta = np.asarray(theta, dtype=float)
    out = np.zeros_like(theta)
    period = 2.0 * math.pi / profile.m
    for lo, hi, a in profile.pieces:
        if a != 0.0 and hi - lo == period:
            out = out + 0.25 * a
        elif a != 0.0 and hi > lo:
            out = out + a * (_green_antiderivative(profile.m, theta - lo)
                             - _green_antiderivative(profile.m, theta - hi))
    return out if out.ndim else float(out)


def corner_angular_speed(profile: AngularProfile, theta):
    """Limiting angular velocity ``u_theta / r`` of the exact-sector flow at ``theta``."""
    return 2.0 * kernel_H(profile, theta)


def sector_boundary_rates(config: SectorConfiguration):
    """Angular speeds of the start and end rays of every sector, from the kernel.

    Returns ``(start_rates, end_rates)``.  Differences of these give the
    physical rates of change of the opening and gap angles.
    """
    prof = config.profile()
    b, z = config.betas, config.zetas
    return corner_angular_speed(prof, b), corner_angular_speed(prof, b + z)


# ---------------------------------------------------------------------------
# ODE right-hand sides
# ---------------------------------------------------------------------------

def _sgn(x):
    return (x > 0) - (x < 0)


def rhs_general(config: SectorConfiguration, consts: NormalizationConstants = NormalizationConstants()):
    """Derivative of ``(beta_1, zeta_1..N, gamma_1..N-1)`` for unit-strength sectors."""
    if config.m < 3:
        raise ValueError("m must be >= 3")
    if np.any(config.strengths != 1.0):
        raise ValueError("rhs_general needs unit strengths; use rhs_m4_weighted for weighted sectors")
    q = config.m / 4.0
    b, z = config.betas, config.zetas
    gaps = config.gaps
    n = config.n
    sz = np.sin(q * z)
    out = np.empty(2 * n)
    out[0] = (consts.c_prime * np.sum(np.sin(q * (2.0 * b + z)) * sz)
              - consts.c_double_prime * np.sum(z))
    for j in range(n):
        acc = 0.0
        for l in range(n):
            s = _sgn(j - l)
            if s:
                acc += s * sz[l] * math.cos(q * (2.0 * (b[j] - b[l]) + (z[j] - z[l])))
        out[1 + j] = consts.c * sz[j] * acc
    for j in range(n - 1):
        acc = 0.0
        for l in range(n):
            s = 1 if j + 0.5 - l > 0 else -1
            acc += s * sz[l] * math.cos(q * ((b[j + 1] - b[l]) + (b[j] - b[l]) + (z[j] - z[l])))
        out[1 + n + j] = consts.c * math.sin(q * gaps[j]) * acc
    return out


def rhs_m4_weighted(config: SectorConfiguration, consts: NormalizationConstants = NormalizationConstants()):
    """Four-fold system with sector strengths inside the interaction sums.

    The ``beta_1`` entry is the physical rotation rate of the first ray,
    ``2 H(beta_1)``, which needs no unknown constants.
    """
    if config.m != 4:
        raise ValueError(f"rhs_m4_weighted is for m = 4, got m = {config.m}")
    b, z, A = config.betas, config.zetas, config.strengths
    gaps = config.gaps
    n = config.n
    sz = np.sin(z)
    out = np.empty(2 * n)
    out[0] = corner_angular_speed(config.profile(), b[0]) if np.any(A != 0) else 0.0
    for j in range(n):
        acc = 0.0
        for l in range(n):
            s = _sgn(j - l)
            if s:
                acc += s * A[l] * sz[l] * math.cos(2.0 * (b[j] - b[l]) + (z[j] - z[l]))
        out[1 + j] = consts.c * sz[j] * acc
    for j in range(n - 1):
        acc = 0.0
        for l in range(n):
            s = 1 if j + 0.5 - l > 0 else -1
            acc += s * A[l] * sz[l] * math.cos((b[j + 1] - b[l]) + (b[j] - b[l]) + (z[j] - z[l]))
        out[1 + n + j] = consts.c * math.sin(gaps[j]) * acc
    return out


def general_system(m, strengths: Sequence[float] | None = None,
                   consts: NormalizationConstants = NormalizationConstants()):
    """``f(t, y)`` for the integrator; picks the weighted form when strengths vary."""
    weighted = strengths is not None and any(a != 1.0 for a in strengths)
    if weighted and m != 4:
        raise ValueError("weighted sectors are only supported for m = 4")
    rhs = rhs_m4_weighted if weighted else rhs_general

    def f(t, y):
        return rhs(SectorConfiguration.from_state(m, y, strengths), consts)

    return f


class AngleConstraint:
    """Admissible region and zero-angle clamping for angle-valued states.

    ``angle_indices`` name the state entries that are angles; the trailing
    gap ``period - sum(angles)`` is checked as well.
    """

    def __init__(self, period, angle_indices, clamp=ZERO_CLAMP, tol=1e-9):
        self.period = period
        self.idx = np.asarray(angle_indices, dtype=int)
        self.clamp = clamp
        self.tol = tol

    def trailing(self, y):
        return self.period - np.sum(y[self.idx])

    def project(self, y):
        y = np.array(y, dtype=float)
        a = y[self.idx]
        a[np.abs(a) < self.clamp] = 0.0
        y[self.idx] = a
        return y

    def frozen(self, y):
        """Indices whose derivative is held at zero for the next step."""
        return self.idx[y[self.idx] == 0.0]

    def admissible(self, y):
        a = y[self.idx]
        return bool(np.all(a >= -self.tol) and np.all(a <= self.period + self.tol)
                    and self.trailing(y) >= -self.tol)


def general_constraint(m, n):
    return AngleConstraint(2.0 * math.pi / m, range(1, 2 * n))
