"""Independent reference computations used to validate the fast paths.

None of these share code with the routines they check: the stream-function
kernel is checked by a Fourier-series solve, the contour velocity by direct
area quadrature of the Biot-Savart kernel in polar coordinates centred at the
target.
"""
from __future__ import annotations

import math

import numpy as np


def fourier_kernel_H(profile, theta, n_modes=20000):
    """Truncated Fourier solve of ``4 H + H'' = h`` for a piecewise-constant ``h``.

    Uses the ``2 pi / m``-periodic modes ``exp(i k m theta)``; mode ``k`` is
    divided by ``4 - (k m)^2``.  The tail beyond ``n_modes`` is bounded by
    ``sum |A| / (pi m^2 n_modes^2)`` and is further reduced by one Richardson
    step in ``1 / n_modes^2``.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))

    def partial(K):
        m = profile.m
        p = 2.0 * math.pi / m
        k = np.arange(1, K + 1)
        c = np.zeros(K, dtype=complex)
        c0 = 0.0
        for lo, hi, a in profile.pieces:
            c0 += a * (hi - lo) / p
            # (1/P) int_lo^hi e^{-ikm x} dx
            c += a * (np.exp(-1j * k * m * hi) - np.exp(-1j * k * m * lo)) / (-1j * k * m * p)
        c = c / (4.0 - (k * m) ** 2)
        out = np.full(theta.shape, c0 / 4.0)
        for i, th in enumerate(theta):
            out[i] += 2.0 * np.real(np.sum(c * np.exp(1j * k * m * th)))
        return out

    fine = partial(n_modes)
    coarse = partial(n_modes // 2)
    return fine + (fine - coarse) / 3.0


def _gauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _chord_lengths(px, py, x, phis):
    """Total length of ``{x + rho e(phi), rho > 0}`` inside the polygon."""
    qx, qy = np.roll(px, -1), np.roll(py, -1)
    ax, ay = px - x[0], py - x[1]
    bx, by = qx - x[0], qy - x[1]
    d = np.stack([np.cos(phis), np.sin(phis)], axis=1)
    # solve rho d = a + s (b - a) for every (ray, edge)
    ex, ey = bx - ax, by - ay
    den = d[:, :1] * (-ey)[None] - d[:, 1:] * (-ex)[None]
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = (ax[None] * (-ey)[None] - ay[None] * (-ex)[None]) / den
        s = (d[:, :1] * ay[None] - d[:, 1:] * ax[None]) / den
    hit = (den != 0) & (s >= 0) & (s < 1) & (rho > 0)
    # crossing sign: +1 leaving (edge turning ccw around x), -1 entering
    crossing = np.sign(d[:, :1] * ey[None] - d[:, 1:] * ex[None])
    return np.sum(np.where(hit, crossing * rho, 0.0), axis=1)


def polar_quadrature_velocity(px, py, x, strength=1.0, order=8):
    """Velocity of a uniform polygonal patch at ``x`` by polar area quadrature.

    ``u(x) = (w / 2 pi) int (x - y)^perp / |x - y|^2 dy``.  In polar coordinates
    about ``x`` the radial integral is the in-patch chord length ``ell(phi)``,
    leaving ``u = -(w / 2 pi) int (-sin phi, cos phi) ell(phi) dphi``.  The
    angular integral is split at the vertex directions, where ``ell`` has
    kinks, and each smooth piece gets Gauss-Legendre of the given order.
    """
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    x = np.asarray(x, dtype=float)
    ang = np.sort(np.unique(np.arctan2(py - x[1], px - x[0])))
    ang = np.concatenate([ang, [ang[0] + 2.0 * math.pi]])
    gx, gw = _gauss(order)
    lo, hi = ang[:-1], ang[1:]
    keep = hi - lo > 1e-15
    lo, hi = lo[keep], hi[keep]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    phis = (mid[:, None] + half[:, None] * gx[None]).ravel()
    weights = (half[:, None] * gw[None]).ravel()
    ell = _chord_lengths(px, py, x, phis)
    ux = np.sum(weights * (-np.sin(phis)) * ell)
    uy = np.sum(weights * np.cos(phis) * ell)
    return -strength / (2.0 * math.pi) * np.array([ux, uy])


def ellipse_velocity(a, b, x, angle=0.0):
    """Exact velocity of the uniform elliptical patch with semi-axes ``a, b``.

    Inside, in the body frame, ``u = (-a y, b x) / (a + b)``.  Outside, the
    conjugate velocity is ``u - i v = -i a b / (z + sqrt(z^2 - a^2 + b^2))``
    with the branch of the root that behaves like ``z`` at infinity.
    """
    c, s = math.cos(angle), math.sin(angle)
    xb = c * x[0] + s * x[1]
    yb = -s * x[0] + c * x[1]
    if (xb / a) ** 2 + (yb / b) ** 2 <= 1.0:
        u = -a / (a + b) * yb
        v = b / (a + b) * xb
    else:
        z = complex(xb, yb)
        f2 = a * a - b * b
        root = np.sqrt(z * z - f2) if f2 else z
        if root.real * z.real + root.imag * z.imag < 0:
            root = -root
        w = -1j * a * b / (z + root)
        u, v = w.real, -w.imag
    return np.array([c * u - s * v, s * u + c * v])
