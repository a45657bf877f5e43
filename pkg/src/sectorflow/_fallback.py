"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""
import math

import numpy as np

_CHUNK = 256
FAR_RATIO = 8.0  # midpoint expansion beyond this many segment lengths


def loop_velocity(nx, ny, starts, strength, tx, ty):
    nx = np.asarray(nx, dtype=float)
    ny = np.asarray(ny, dtype=float)
    tx = np.asarray(tx, dtype=float)
    ty = np.asarray(ty, dtype=float)
    ux = np.zeros(tx.shape[0])
    uy = np.zeros(tx.shape[0])
    for k in range(len(starts) - 1):
        w = strength[k]
        s0, s1 = starts[k], starts[k + 1]
        if w == 0.0 or s1 - s0 < 2:
            continue
        qx_n, qy_n = nx[s0:s1], ny[s0:s1]
        px_n, py_n = np.roll(qx_n, 1), np.roll(qy_n, 1)
        dx, dy = qx_n - px_n, qy_n - py_n
        L = np.hypot(dx, dy)
        keep = L > 0.0
        px_n, py_n, qx_n, qy_n = px_n[keep], py_n[keep], qx_n[keep], qy_n[keep]
        L = L[keep]
        ex, ey = dx[keep] / L, dy[keep] / L
        for c0 in range(0, tx.shape[0], _CHUNK):
            x = tx[c0:c0 + _CHUNK, None]
            y = ty[c0:c0 + _CHUNK, None]
            px, py = px_n - x, py_n - y
            qx, qy = qx_n - x, qy_n - y
            rp, rq = px * px + py * py, qx * qx + qy * qy
            with np.errstate(divide="ignore", invalid="ignore"):
                lp = np.where(rp > 0.0, np.log(rp), 0.0)
                lq = np.where(rq > 0.0, np.log(rq), 0.0)
            tp = px * ex + py * ey
            tq = qx * ex + qy * ey
            h = ex * py - ey * px
            theta = np.arctan2(px * qy - py * qx, px * qx + py * qy)
            S = 0.5 * (tq * lq - tp * lp) - L - h * theta
            mx, my = 0.5 * (px + qx), 0.5 * (py + qy)
            M = mx * mx + my * my
            far = M > FAR_RATIO ** 2 * L * L
            a2 = (mx * ex + my * ey) ** 2
            with np.errstate(divide="ignore", invalid="ignore"):
                S_far = (L * 0.5 * np.log(M) + L ** 3 * (M - 2.0 * a2) / (24.0 * M * M)
                         - L ** 5 * (M * M - 8.0 * M * a2 + 8.0 * a2 * a2) / (320.0 * M ** 4))
            S = np.where(far, S_far, S)
            ux[c0:c0 + _CHUNK] += w * (S @ ex)
            uy[c0:c0 + _CHUNK] += w * (S @ ey)
    return -ux / (2.0 * math.pi), -uy / (2.0 * math.pi)


def _reduced(y):
    z1, z2, g = y[..., 0], y[..., 1], y[..., 2]
    p = np.sin(z1) * np.sin(z2) * np.cos(2.0 * g + z1 + z2)
    return np.stack([-p, p, np.sin(g) * np.sin(z1 - z2) * np.cos(g + z1 + z2)], axis=-1)


def _reduced_scalar(z1, z2, g):
    p = math.sin(z1) * math.sin(z2) * math.cos(2.0 * g + z1 + z2)
    return -p, p, math.sin(g) * math.sin(z1 - z2) * math.cos(g + z1 + z2)


def rk4_reduced(y0, dt, nsteps, every):
    y0 = np.ascontiguousarray(y0, dtype=float)
    n = y0.shape[0]
    out = np.empty((n, nsteps // every + 1, 3))
    if n == 1:
        # scalar loop beats numpy dispatch overhead for a single trajectory
        f = _reduced_scalar
        z1, z2, g = y0[0]
        out[0, 0] = z1, z2, g
        h2, h6, r = 0.5 * dt, dt / 6.0, 1
        for s in range(1, nsteps + 1):
            a = f(z1, z2, g)
            b = f(z1 + h2 * a[0], z2 + h2 * a[1], g + h2 * a[2])
            c = f(z1 + h2 * b[0], z2 + h2 * b[1], g + h2 * b[2])
            d = f(z1 + dt * c[0], z2 + dt * c[1], g + dt * c[2])
            z1 = z1 + h6 * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0])
            z2 = z2 + h6 * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1])
            g = g + h6 * (a[2] + 2.0 * b[2] + 2.0 * c[2] + d[2])
            if s % every == 0:
                out[0, r] = z1, z2, g
                r += 1
        return out
    y = y0.copy()
    out[:, 0] = y
    r = 1
    for s in range(1, nsteps + 1):
        k1 = _reduced(y)
        k2 = _reduced(y + 0.5 * dt * k1)
        k3 = _reduced(y + 0.5 * dt * k2)
        k4 = _reduced(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if s % every == 0:
            out[:, r] = y
            r += 1
    return out


def _one_dim(g, sign):
    return sign * np.sin(g) * np.sin(0.25 * np.pi - 2.0 * g) * np.cos(g + 0.25 * np.pi)


def rk4_one_dim(g0, sign, dt, nsteps, every):
    g = np.array(g0, dtype=float)
    out = np.empty((g.shape[0], nsteps // every + 1))
    out[:, 0] = g
    r = 1
    for s in range(1, nsteps + 1):
        a = _one_dim(g, sign)
        b = _one_dim(g + 0.5 * dt * a, sign)
        c = _one_dim(g + 0.5 * dt * b, sign)
        d = _one_dim(g + dt * c, sign)
        g = g + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
        if s % every == 0:
            out[:, r] = g
            r += 1
    return out
