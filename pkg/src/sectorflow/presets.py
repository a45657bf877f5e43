"""Named scenario configurations bundled with the command-line runner."""
import math

PRESETS = {
    "angles-two-sector": {
        "command": "angles",
        "description": "Two unit sectors of a four-fold patch under the general angle ODE",
        "anchor": "angle ODE for N sectors with m-fold symmetry",
        "config": {"m": 4, "zetas": [0.5, 0.15], "gaps": [0.05], "beta1": 0.0,
                   "t_end": 20.0, "dt": 1e-2, "sample_dt": 0.1},
    },
    "angles-five-fold": {
        "command": "angles",
        "description": "Three sectors of a five-fold patch, adaptive step control",
        "anchor": "angle ODE for N sectors with m-fold symmetry",
        "config": {"m": 5, "zetas": [0.3, 0.2, 0.25], "gaps": [0.1, 0.1], "beta1": 0.0,
                   "t_end": 10.0, "dt": 1e-2, "sample_dt": 0.1, "adaptive": True},
    },
    "equilibria": {
        "command": "equilibria",
        "description": "Explicit rotating family and the sweep over two-interval supports",
        "anchor": "rotating two-sector family and the two-interval non-existence result",
        "config": {"xi_points": 100, "sweep_divisions": 64, "straddle_eps": 0.05},
    },
    "cusp": {
        "command": "cusp",
        "description": "Cusp formation from off-diagonal data with zeta1 + zeta2 = pi/4",
        "anchor": "exponential cusp formation at rate 1/2",
        "config": {"initial": [[math.pi / 4 - 0.3, 0.3, 0.2], [math.pi / 4 - 0.2, 0.2, 0.3],
                               [0.05, math.pi / 4 - 0.05, 0.05], [math.pi / 4 - 0.1, 0.1, 0.6]],
                   "t_end": 100.0, "dt": 1e-3, "sample_dt": 0.01},
    },
    "cusp-eightfold": {
        "command": "cusp",
        "description": "Diagonal data gamma = zeta2 relaxing to the eightfold-symmetric state",
        "anchor": "one-dimensional gap equation, convergence to pi/8",
        "config": {"initial": [[math.pi / 4 - 0.2, 0.2, 0.2]], "t_end": 60.0, "dt": 1e-3,
                   "sample_dt": 0.01},
    },
    "portrait": {
        "command": "portrait",
        "description": "64 x 64 phase portrait and basin map of the reduced system",
        "anchor": "phase portrait of the reduced system: eightfold line and two cusp basins",
        "config": {"resolution": 64, "t_end": 60.0, "dt": 1e-2},
    },
    "spiral": {
        "command": "spiral",
        "description": "Spiral-generating patch, theta0 = pi/8, delta = nu = 0.05, T = 40",
        "anchor": "spiral formation: linear growth of the winding number",
        "config": {"patch": "spiral", "t_end": 40.0, "snapshot_every": 20},
    },
    "spiral-short": {
        "command": "spiral",
        "description": "First five time units of the spiral run (smoke test)",
        "anchor": "spiral-generating patch",
        "config": {"patch": "spiral", "t_end": 5.0, "snapshot_every": 5, "min_slope": 0.0},
    },
    "corner": {
        "command": "spiral",
        "description": "Four-fold sector patch: corner opening and rotation over t in [0, 5]",
        "anchor": "corner persistence, corner speed (1 - cos 4 theta0) / 4",
        "config": {"patch": "sector", "t_end": 5.0, "snapshot_every": 5, "far_spacing": 1e-2, "sample_every": 10,
                   "grading": None},
    },
    "validate": {
        "command": "validate",
        "description": "Kernel, disk, ellipse and area-quadrature oracle checks",
        "anchor": "disk speed 1/2, Kirchhoff ellipse",
        "config": {},
    },
}


def list_presets():
    lines = []
    width = max(len(k) for k in PRESETS)
    for name, p in PRESETS.items():
        lines.append(f"{name:<{width}}  [{p['command']}] {p['description']} ({p['anchor']})")
    return "\n".join(lines)
