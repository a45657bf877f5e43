"""Compiled hot loops: log-kernel contour velocity and batched RK4 for the
reduced two-sector angle system.

Every function here has a drop-in twin in ``_fallback`` with identical
signature and semantics; ``sectorflow.kernels`` picks one at import.
"""
import numpy as np

from libc.math cimport atan2, cos, log, sin, sqrt, M_PI

FAR_RATIO = 8.0
cdef double FAR2 = FAR_RATIO * FAR_RATIO


def loop_velocity(const double[::1] nx, const double[::1] ny,
                  const long[::1] starts, const double[::1] strength,
                  const double[::1] tx, const double[::1] ty):
    """Velocity induced at targets by closed polygonal vortex loops.

    Loop ``k`` owns nodes ``starts[k]:starts[k+1]`` and carries vorticity
    ``strength[k]``; its last node connects back to its first.  Each segment
    contributes ``-(w/2pi) * e * int_seg log|x - y| ds`` with the integral
    taken in closed form, so targets on the contour are handled exactly.
    Segments whose midpoint lies more than ``FAR_RATIO`` segment lengths from
    the target use the three-term midpoint expansion of the same integral
    (truncation error below 2e-9 times the segment length).
    """
    cdef Py_ssize_t n_t = tx.shape[0]
    cdef Py_ssize_t n_loops = starts.shape[0] - 1
    cdef Py_ssize_t n_nodes = nx.shape[0]
    ux_arr = np.zeros(n_t)
    uy_arr = np.zeros(n_t)
    cdef double[::1] ux = ux_arr
    cdef double[::1] uy = uy_arr
    # per-segment geometry, segment j running from the previous node to node j
    seg_arr = np.zeros((n_nodes, 3))
    cdef double[:, ::1] seg = seg_arr
    cdef Py_ssize_t i, j, k, s0, s1, prev
    cdef double x, y, w, sx, sy, ax, ay
    cdef double px, py, qx, qy, rp, rq, lp, lq, dx, dy, L, ex, ey
    cdef double tp, tq, h, theta, S, mx, my, M, a, a2
    cdef bint lp_ok, lq_ok
    for k in range(n_loops):
        s0 = starts[k]
        s1 = starts[k + 1]
        for j in range(s0, s1):
            prev = j - 1 if j > s0 else s1 - 1
            dx = nx[j] - nx[prev]
            dy = ny[j] - ny[prev]
            L = sqrt(dx * dx + dy * dy)
            seg[j, 0] = L
            if L > 0.0:
                seg[j, 1] = dx / L
                seg[j, 2] = dy / L
    for i in range(n_t):
        x = tx[i]
        y = ty[i]
        sx = 0.0
        sy = 0.0
        for k in range(n_loops):
            w = strength[k]
            s0 = starts[k]
            s1 = starts[k + 1]
            if w == 0.0 or s1 - s0 < 2:
                continue
            ax = 0.0
            ay = 0.0
            px = nx[s1 - 1] - x
            py = ny[s1 - 1] - y
            rp = px * px + py * py
            lp_ok = False
            for j in range(s0, s1):
                qx = nx[j] - x
                qy = ny[j] - y
                rq = qx * qx + qy * qy
                lq_ok = False
                L = seg[j, 0]
                if L > 0.0:
                    ex = seg[j, 1]
                    ey = seg[j, 2]
                    mx = 0.5 * (px + qx)
                    my = 0.5 * (py + qy)
                    M = mx * mx + my * my
                    if M > FAR2 * L * L:
                        a = mx * ex + my * ey
                        a2 = a * a
                        S = (L * 0.5 * log(M) + L * L * L * (M - 2.0 * a2) / (24.0 * M * M)
                             - L * L * L * L * L * (M * M - 8.0 * M * a2 + 8.0 * a2 * a2) / (320.0 * M * M * M * M))
                    else:
                        if not lp_ok:
                            lp = log(rp) if rp > 0.0 else 0.0
                        lq = log(rq) if rq > 0.0 else 0.0
                        lq_ok = True
                        tp = px * ex + py * ey
                        tq = qx * ex + qy * ey
                        h = ex * py - ey * px
                        theta = atan2(px * qy - py * qx, px * qx + py * qy)
                        S = 0.5 * (tq * lq - tp * lp) - L - h * theta
                    ax += ex * S
                    ay += ey * S
                px = qx
                py = qy
                rp = rq
                lp = lq
                lp_ok = lq_ok
            sx += w * ax
            sy += w * ay
        ux[i] = -sx / (2.0 * M_PI)
        uy[i] = -sy / (2.0 * M_PI)
    return ux_arr, uy_arr


cdef inline void _reduced(double z1, double z2, double g, double* out) noexcept nogil:
    cdef double p = sin(z1) * sin(z2) * cos(2.0 * g + z1 + z2)
    out[0] = -p
    out[1] = p
    out[2] = sin(g) * sin(z1 - z2) * cos(g + z1 + z2)


def rk4_reduced(const double[:, ::1] y0, double dt, long nsteps, long every):
    """Fixed-step RK4 for a batch of reduced (zeta1, zeta2, gamma) states.

    Returns an array of shape ``(batch, nsteps // every + 1, 3)`` holding the
    state every ``every`` steps, starting with the initial state.
    """
    cdef Py_ssize_t n = y0.shape[0]
    cdef Py_ssize_t nrec = nsteps // every + 1
    out_arr = np.empty((n, nrec, 3))
    cdef double[:, :, ::1] out = out_arr
    cdef double k1[3]
    cdef double k2[3]
    cdef double k3[3]
    cdef double k4[3]
    cdef double z1, z2, g, h2 = 0.5 * dt, h6 = dt / 6.0
    cdef Py_ssize_t b, s, r
    for b in range(n):
        z1 = y0[b, 0]
        z2 = y0[b, 1]
        g = y0[b, 2]
        out[b, 0, 0] = z1
        out[b, 0, 1] = z2
        out[b, 0, 2] = g
        r = 1
        for s in range(1, nsteps + 1):
            _reduced(z1, z2, g, k1)
            _reduced(z1 + h2 * k1[0], z2 + h2 * k1[1], g + h2 * k1[2], k2)
            _reduced(z1 + h2 * k2[0], z2 + h2 * k2[1], g + h2 * k2[2], k3)
            _reduced(z1 + dt * k3[0], z2 + dt * k3[1], g + dt * k3[2], k4)
            z1 = z1 + h6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            z2 = z2 + h6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            g = g + h6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
            if s % every == 0:
                out[b, r, 0] = z1
                out[b, r, 1] = z2
                out[b, r, 2] = g
                r += 1
    return out_arr


cdef inline double _one_dim(double g, double sign) noexcept nogil:
    return sign * sin(g) * sin(0.25 * M_PI - 2.0 * g) * cos(g + 0.25 * M_PI)


def rk4_one_dim(const double[::1] g0, double sign, double dt, long nsteps, long every):
    """Fixed-step RK4 for a batch of symmetric one-dimensional gap flows."""
    cdef Py_ssize_t n = g0.shape[0]
    cdef Py_ssize_t nrec = nsteps // every + 1
    out_arr = np.empty((n, nrec))
    cdef double[:, ::1] out = out_arr
    cdef double g, a, b_, c, d
    cdef Py_ssize_t b, s, r
    for b in range(n):
        g = g0[b]
        out[b, 0] = g
        r = 1
        for s in range(1, nsteps + 1):
            a = _one_dim(g, sign)
            b_ = _one_dim(g + 0.5 * dt * a, sign)
            c = _one_dim(g + 0.5 * dt * b_, sign)
            d = _one_dim(g + dt * c, sign)
            g = g + dt / 6.0 * (a + 2.0 * b_ + 2.0 * c + d)
            if s % every == 0:
                out[b, r] = g
                r += 1
    return out_arr
