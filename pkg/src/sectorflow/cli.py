"""Command-line scenario runner.

    sectorflow <command> [--preset NAME | --config FILE] [--out DIR] ...
    sectorflow list-presets

Every run writes ``manifest.json`` into the output directory, also when it
fails.  Exit codes: 0 all embedded checks passed, 1 some check failed,
2 bad configuration, 3 numerical halt (partial artifacts are kept).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .io import contours_svg, portrait_svg, series_svg, write_csv, write_json
from .presets import PRESETS, list_presets

COMMANDS = ("angles", "equilibria", "cusp", "portrait", "spiral", "validate")
EXIT_OK, EXIT_CHECKS, EXIT_CONFIG, EXIT_HALT = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


class Halted(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# configuration schema
# ---------------------------------------------------------------------------

def _num(lo=None, hi=None, integer=False, strict_lo=False):
    def check(name, v):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"field '{name}': expected a number, got {json.dumps(v)}")
        if integer and int(v) != v:
            raise ConfigError(f"field '{name}': expected an integer, got {v}")
        if not math.isfinite(v):
            raise ConfigError(f"field '{name}': must be finite")
        if lo is not None and (v < lo or (strict_lo and v == lo)):
            raise ConfigError(f"field '{name}': must be {'>' if strict_lo else '>='} {lo}, got {v}")
        if hi is not None and v > hi:
            raise ConfigError(f"field '{name}': must be <= {hi}, got {v}")
        return int(v) if integer else float(v)
    return check


def _numlist(length=None, nested=None):
    def check(name, v):
        if v is None:
            return None
        if not isinstance(v, list):
            raise ConfigError(f"field '{name}': expected a list")
        if nested:
            return [_numlist(nested)(f"{name}[{i}]", x) for i, x in enumerate(v)]
        if length is not None and len(v) != length:
            raise ConfigError(f"field '{name}': expected {length} entries, got {len(v)}")
        return [_num()(f"{name}[{i}]", x) for i, x in enumerate(v)]
    return check


def _flag(name, v):
    if not isinstance(v, bool):
        raise ConfigError(f"field '{name}': expected true or false")
    return v


def _choice(*options):
    def check(name, v):
        if v not in options:
            raise ConfigError(f"field '{name}': expected one of {', '.join(options)}, got {json.dumps(v)}")
        return v
    return check


def _optional(check):
    def wrapped(name, v):
        return None if v is None else check(name, v)
    return wrapped


SCHEMAS = {
    "angles": {
        "m": (4, _num(3, integer=True)),
        "zetas": ([0.5, 0.15], _numlist()),
        "gaps": ([0.05], _numlist()),
        "beta1": (0.0, _num()),
        "strengths": (None, _numlist()),
        "constants": ({"c": 1.0, "c_prime": 1.0, "c_double_prime": 0.0}, None),
        "t_end": (10.0, _num(0)),
        "dt": (1e-3, _num(0, strict_lo=True)),
        "sample_dt": (0.1, _num(0, strict_lo=True)),
        "adaptive": (False, _flag),
        "tol": (1e-10, _num(0, strict_lo=True)),
    },
    "equilibria": {
        "xi_points": (100, _num(2, integer=True)),
        "sweep_divisions": (64, _num(3, integer=True)),
        "straddle_eps": (0.05, _num(0, math.pi / 8, strict_lo=True)),
        "family_tol": (1e-14, _num(0)),
        "straddle_tol": (1e-12, _num(0)),
    },
    "cusp": {
        "initial": ([[math.pi / 4 - 0.3, 0.3, 0.2]], _numlist(nested=3)),
        "t_end": (100.0, _num(0)),
        "dt": (1e-3, _num(0, strict_lo=True)),
        "sample_dt": (0.01, _num(0, strict_lo=True)),
        "rate_tol": (0.05, _num(0)),
    },
    "portrait": {
        "resolution": (64, _num(2, integer=True)),
        "t_end": (60.0, _num(10)),
        "dt": (1e-2, _num(0, strict_lo=True)),
    },
    "spiral": {
        "patch": ("spiral", _choice("spiral", "sector")),
        "theta0": (math.pi / 8, _num(0, strict_lo=True)),
        "delta": (0.05, _num(0, strict_lo=True)),
        "nu": (0.05, _num(0, strict_lo=True)),
        "smoothing": (None, _optional(_num(0, strict_lo=True))),
        "t_end": (40.0, _num(0)),
        "dt": (1e-2, _num(0, strict_lo=True)),
        "sample_every": (50, _num(1, integer=True)),
        "remesh_every": (5, _num(1, integer=True)),
        "check_every": (25, _num(1, integer=True)),
        "near_spacing": (2.5e-3, _num(0, strict_lo=True)),
        "far_spacing": (2e-2, _num(0, strict_lo=True)),
        "curvature_weight": (2e-2, _num(0)),
        "grading": (0.1, _optional(_num(0, strict_lo=True))),
        "spacing_floor": (1e-8, _num(0, strict_lo=True)),
        "fit_radius": (0.02, _num(0, strict_lo=True)),
        "fit_spread": (0.01, _optional(_num(0, strict_lo=True))),
        "r0": (0.3, _num(0, strict_lo=True)),
        "snapshot_every": (0, _num(0, integer=True)),
        "min_slope": (0.5 * 0.25 / (2 * math.pi), _num()),
        "min_r2": (0.9, _num()),
        "tolerance": (0.02, _num(0)),
    },
    "validate": {
        "kernel_profiles": (10, _num(1, integer=True)),
        "quadrature_points": (20, _num(1, integer=True)),
        "disk_nodes": (512, _num(16, integer=True)),
        "ellipse_nodes": (512, _num(16, integer=True)),
        "ellipse_t_end": (5.0, _num(0, strict_lo=True)),
        "ellipse_dt": (1e-2, _num(0, strict_lo=True)),
    },
}


def resolve_config(command, raw):
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    schema = SCHEMAS[command]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown field '{unknown[0]}' for command '{command}'")
    out = {}
    for name, (default, check) in schema.items():
        v = raw.get(name, default)
        out[name] = check(name, v) if check is not None and v is not None else v
    return out


def load_config_file(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# ---------------------------------------------------------------------------
# checks bookkeeping
# ---------------------------------------------------------------------------

class Checks:
    def __init__(self):
        self.items = []

    def add(self, name, value, threshold, passed):
        self.items.append({"name": name, "value": value, "threshold": threshold, "passed": bool(passed)})
        return passed

    @property
    def all_passed(self):
        return all(c["passed"] for c in self.items)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_angles(cfg, out, opts, checks):
    from .angles import (NormalizationConstants, SectorConfiguration, general_constraint,
                         general_system, rhs_general, sector_boundary_rates)
    from .integrate import integrate

    m, zetas, gaps = cfg["m"], cfg["zetas"], cfg["gaps"]
    try:
        consts = NormalizationConstants(**cfg["constants"])
        config = SectorConfiguration.from_angles(m, zetas, gaps, cfg["beta1"], cfg["strengths"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field 'zetas'/'gaps'/'constants': {exc}") from None
    n = config.n
    f = general_system(m, config.strengths, consts)
    t_eval = np.arange(0.0, cfg["t_end"] + 0.5 * cfg["sample_dt"], cfg["sample_dt"])
    traj = integrate(f, config.state(), (0.0, float(t_eval[-1])), cfg["dt"], t_eval=t_eval,
                     adaptive=cfg["adaptive"], tol=cfg["tol"], constraint=general_constraint(m, n))
    header = ["t", "beta1"] + [f"zeta{i + 1}" for i in range(n)] + [f"gamma{i + 1}" for i in range(n - 1)]
    write_csv(out / "angles.csv", header, [[t, *y] for t, y in zip(traj.t, traj.y)])
    series_svg(out / "angles.svg", traj.t, [traj.y[:, 1 + i] for i in range(min(n, 3))],
               [f"zeta{i + 1}" for i in range(min(n, 3))], "sector widths")
    checks.add("trajectory finite", bool(np.all(np.isfinite(traj.y))), True, np.all(np.isfinite(traj.y)))
    if m == 4 and all(a == 1.0 for a in config.strengths) and consts.c == 1.0:
        start, end = sector_boundary_rates(config)
        exact = np.concatenate([end - start, start[1:] - end[:-1]])
        ode = rhs_general(config, consts)[1:]
        err = float(np.max(np.abs(exact - ode)))
        checks.add("ode matches exact-sector kernel rates at t=0", err, 1e-12, err <= 1e-12)
    return {"status": traj.status, "message": traj.message}


def cmd_equilibria(cfg, out, opts, checks):
    from .equilibria import (rigid_rotation_residual, rotating_family, stationarity_residual,
                             straddling_pair, sweep_two_interval, zero_mean_rotating)

    xs = np.linspace(0.0, math.pi / 8, cfg["xi_points"])
    rows, worst = [], 0.0
    for xi in xs:
        r = stationarity_residual(rotating_family(xi))
        worst = max(worst, float(np.max(np.abs(r))))
        _, speed = zero_mean_rotating(xi) if 0 < xi < math.pi / 8 else (None, float("nan"))
        rows.append([xi, *r, speed])
    write_csv(out / "rotating_family.csv", ["xi", "res_zeta1", "res_zeta2", "res_gamma", "zero_mean_speed"], rows)
    checks.add("rotating family stationary", worst, cfg["family_tol"], worst <= cfg["family_tol"])

    step = (math.pi / 4) / cfg["sweep_divisions"]
    rep = sweep_two_interval(step)
    straddle = rigid_rotation_residual(straddling_pair(cfg["straddle_eps"]))
    write_json(out / "sweep.json", {"step": step, "configurations": rep.n_configs,
                                    "min_residual": rep.min_residual, "argmin": rep.argmin,
                                    "merged_pair_max_residual": rep.single_interval_max,
                                    "straddle_eps": cfg["straddle_eps"], "straddle_residual": straddle})
    checks.add("two-interval sweep minimum positive", rep.min_residual, 0.0, rep.min_residual > 0.0)
    checks.add("straddling pair rotates", straddle, cfg["straddle_tol"], straddle <= cfg["straddle_tol"])
    return {"status": "ok"}


def cmd_cusp(cfg, out, opts, checks):
    from . import cusp

    trajs = cusp.integrate_reduced(np.array(cfg["initial"]), cfg["t_end"], cfg["dt"], cfg["sample_dt"])
    rows, traj_rows = [], []
    for i, (y0, tr) in enumerate(zip(cfg["initial"], trajs)):
        label = cusp.classify_asymptotic(tr)
        rate = float("nan")
        if label in (cusp.CUSP_ZETA1, cusp.CUSP_ZETA2):
            rate = cusp.cusp_rate(tr, label)
            ok = abs(rate - 0.5) <= cfg["rate_tol"] * 0.5
            checks.add(f"cusp rate #{i}", rate, [0.5 * (1 - cfg["rate_tol"]), 0.5 * (1 + cfg["rate_tol"])], ok)
        checks.add(f"classified #{i}", label, "not undecided", label != cusp.UNDECIDED)
        collapsing = {"cusp_zeta1": "zeta1", "cusp_zeta2": "zeta2"}.get(label, "none")
        rows.append([i, *y0, label, collapsing, rate])
        traj_rows.extend([i, t, *y] for t, y in zip(tr.t, tr.y))
    write_csv(out / "cusp_classification.csv",
              ["index", "zeta1_0", "zeta2_0", "gamma_0", "label", "collapsing_angle", "rate"], rows)
    write_csv(out / "cusp_trajectories.csv", ["index", "t", "zeta1", "zeta2", "gamma"], traj_rows)
    return {"status": "ok"}


def cmd_portrait(cfg, out, opts, checks):
    from . import cusp

    res = cfg["resolution"]
    Z2, G, dz, dg = cusp.phase_portrait(res)
    _, _, labels = cusp.basin_map(res, cfg["t_end"], cfg["dt"])
    rows = [[Z2[i, j], G[i, j], dz[i, j], dg[i, j], labels[i, j]]
            for i in range(res) for j in range(res)]
    write_csv(out / "portrait.csv", ["zeta2", "gamma", "dzeta2", "dgamma", "label"], rows)
    portrait_svg(out / "portrait.svg", Z2, G, labels, dz, dg)
    h = (math.pi / 4) / (res - 1)
    eight = labels == cusp.EIGHTFOLD
    off = eight & (np.abs(Z2 - G) > h * (1 + 1e-9))
    checks.add("eightfold only on the invariant diagonal", int(off.sum()), 0, not off.any())
    interior = (np.abs(Z2 - G) < 1e-12) & (Z2 > h / 2) & (Z2 < math.pi / 4 - h / 2)
    diag_ok = bool(np.all(eight[interior]))
    checks.add("diagonal converges to (pi/8, pi/8)", diag_ok, True, diag_ok)
    upper = labels[(G - Z2 > h) & (Z2 > h / 2) & (G < math.pi / 4 - h / 2)]
    lower = labels[(Z2 - G > h) & (G > h / 2) & (Z2 < math.pi / 4 - h / 2)]
    checks.add("gamma > zeta2 basin collapses zeta2", bool(np.all(upper == cusp.CUSP_ZETA2)), True,
               np.all(upper == cusp.CUSP_ZETA2))
    checks.add("zeta2 > gamma basin collapses zeta1", bool(np.all(lower == cusp.CUSP_ZETA1)), True,
               np.all(lower == cusp.CUSP_ZETA1))
    return {"status": "ok"}


def _snapshot_files(out, record, copies):
    if not record.snapshots:
        return
    for k, (t, nodes) in enumerate(record.snapshots):
        write_csv(out / "snapshots" / f"contour_{k:03d}.csv", ["node", "x", "y"],
                  [[i, x, y] for i, (x, y) in enumerate(nodes)])
    write_csv(out / "snapshots" / "times.csv", ["snapshot", "t"], [[k, t] for k, (t, _) in enumerate(record.snapshots)])
    contours_svg(out / "snapshots.svg", record.snapshots, copies)


def cmd_spiral(cfg, out, opts, checks):
    from .contour.experiment import (RunSettings, SpiralParams, corner_speed, run_corner_experiment,
                                     run_spiral_experiment, winding_fit)

    snap = opts.snapshot_every if opts.snapshot_every is not None else cfg["snapshot_every"]
    try:
        settings = RunSettings(t_end=cfg["t_end"], dt=cfg["dt"], sample_every=cfg["sample_every"],
                               remesh_every=cfg["remesh_every"], check_every=cfg["check_every"],
                               near_spacing=cfg["near_spacing"], far_spacing=cfg["far_spacing"],
                               curvature_weight=cfg["curvature_weight"], grading=cfg["grading"],
                               spacing_floor=cfg["spacing_floor"], snapshot_every=snap)
        if cfg["patch"] == "sector":
            record = run_corner_experiment(cfg["theta0"], fit_radius=cfg["fit_radius"], settings=settings)
        else:
            params = SpiralParams(cfg["theta0"], cfg["delta"], cfg["nu"], cfg["smoothing"],
                                  cfg["fit_radius"], cfg["r0"], settings, cfg["fit_spread"])
            record = run_spiral_experiment(params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    base = ["t", "area", "perimeter", "corner_angle", "corner_bisector", "winding", "l1_disk", "max_vel_dev"]
    names = [n for n in base if n in record.names] + [n for n in record.names if n not in base]
    write_csv(out / "trajectory.csv", names, [[r[n] for n in names] for r in record.rows])
    _snapshot_files(out, record, 4)
    t = record.times
    area = record.column("area")
    drift = float(np.max(np.abs(area - area[0])) / abs(area[0]))
    checks.add("area drift", drift, 1e-4, drift < 1e-4)
    tol = cfg["tolerance"]
    c0 = corner_speed(cfg["theta0"])
    if cfg["patch"] == "sector":
        ang = record.column("corner_angle")
        spread = float(np.max(np.abs(ang / ang[0] - 1.0)))
        checks.add("corner opening constant", spread, tol, spread <= tol)
        rate = float(np.polyfit(t, record.column("corner_bisector"), 1)[0])
        checks.add("bisector rotation rate", rate, [c0 * (1 - tol), c0 * (1 + tol)], abs(rate / c0 - 1) <= tol)
        series_svg(out / "corner.svg", t, [record.column("corner_bisector")], ["bisector"], "corner bisector angle")
    else:
        slope, icpt, r2 = winding_fit(record) if len(t) > 2 else (float("nan"), float("nan"), float("nan"))
        checks.add("winding slope", slope, cfg["min_slope"], slope >= cfg["min_slope"])
        checks.add("winding fit R^2", r2, cfg["min_r2"], r2 > cfg["min_r2"])
        crossings = record.column("crossing_margin")
        checks.add("line-intersection inequality at every sample", int(crossings.min()), 0, crossings.min() >= 0)
        l1 = record.column("l1_disk")
        excess = float(np.max(l1 ** 2 - record.sv_bound))
        checks.add("L1 stability inequality (slack 1e-2)", excess, 1e-2, excess <= 1e-2)
        write_json(out / "winding_fit.json", {"slope": slope, "intercept": icpt, "r2": r2,
                                              "corner_speed": c0, "flags": record.flags})
        series_svg(out / "winding.svg", t, [record.column("winding")], ["winding"], "winding number of tracked strand")
    if record.status != "ok":
        raise Halted(record.message)
    return {"status": record.status, "flags": record.flags}


def cmd_validate(cfg, out, opts, checks):
    from .angles import AngularProfile, corner_angular_speed, kernel_H
    from .contour.geometry import orientation_angle
    from .contour.state import SimulationState, disk_contour, ellipse_contour, step, velocity_at
    from .contour.patches import build_sector_patch
    from .oracles import ellipse_velocity, fourier_kernel_H, polar_quadrature_velocity

    rng = np.random.default_rng(opts.seed)
    rows = []
    P = math.pi / 2
    worst = 0.0
    for k in range(cfg["kernel_profiles"]):
        cuts = np.sort(rng.uniform(0.0, P, 2 * int(rng.integers(1, 4))))
        pieces = tuple((cuts[i], cuts[i + 1], float(rng.uniform(-1, 2))) for i in range(0, len(cuts), 2))
        prof = AngularProfile(4, pieces)
        th = rng.uniform(0, 2 * math.pi, 8)
        err = float(np.max(np.abs(kernel_H(prof, th) - fourier_kernel_H(prof, th))))
        worst = max(worst, err)
        rows.append(["kernel_vs_fourier", k, err])
    checks.add("kernel vs Fourier oracle", worst, 1e-8, worst <= 1e-8)
    one = float(np.max(np.abs(corner_angular_speed(AngularProfile.constant(4), np.linspace(0, 6, 13)) - 0.5)))
    checks.add("constant profile speed 1/2", one, 1e-15, one <= 1e-15)
    th0 = math.pi / 8
    sec = abs(float(corner_angular_speed(AngularProfile(4, ((-th0, th0, 1.0),)), th0)) - 0.25 * (1 - math.cos(4 * th0)))
    checks.add("sector corner speed", sec, 1e-12, sec <= 1e-12)

    disk = SimulationState([disk_contour(cfg["disk_nodes"])])
    nodes = disk.contours[0].nodes
    u = velocity_at(disk, nodes)
    derr = float(np.max(np.hypot(*(u - 0.5 * np.column_stack([-nodes[:, 1], nodes[:, 0]])).T)))
    checks.add("disk boundary velocity", derr, 1e-3, derr < 1e-3)
    rows.append(["disk_boundary", 0, derr])

    a, b = 1.5, 1.0
    ell = SimulationState([ellipse_contour(a, b, cfg["ellipse_nodes"])])
    sector = build_sector_patch(th0)
    for name, st in (("disk", disk), ("ellipse", ell), ("sector", sector)):
        pts = rng.uniform(-1.6, 1.6, (cfg["quadrature_points"], 2))
        fast = velocity_at(st, pts)
        ref = np.zeros_like(fast)
        for k in range(st.copies):
            ang = 2 * math.pi * k / st.copies
            c, s = math.cos(ang), math.sin(ang)
            poly = st.contours[0].nodes @ np.array([[c, s], [-s, c]])
            for i, p in enumerate(pts):
                ref[i] += polar_quadrature_velocity(poly[:, 0], poly[:, 1], p)
        qerr = float(np.max(np.hypot(*(fast - ref).T)))
        checks.add(f"{name}: boundary integral vs area quadrature", qerr, 1e-4, qerr <= 1e-4)
        rows.append([f"quadrature_{name}", 0, qerr])

    en = ell.contours[0].nodes
    ue = velocity_at(ell, en)
    exact = np.array([ellipse_velocity(a, b, p) for p in en])
    eerr = float(np.max(np.hypot(*(ue - exact).T)) / np.max(np.hypot(*exact.T)))
    checks.add("ellipse boundary velocity vs exact field", eerr, 1e-2, eerr < 1e-2)
    rate = a * b / (a + b) ** 2
    st, t_rows, t_end = ell, [], cfg["ellipse_t_end"]
    nsteps = int(round(t_end / cfg["ellipse_dt"]))
    lift, prev = 0.0, 0.0
    for k in range(nsteps + 1):
        ang = orientation_angle(st.contours[0].nodes)
        d = (ang - prev + math.pi / 2) % math.pi - math.pi / 2
        lift, prev = lift + d, ang
        t_rows.append([st.time, lift, st.total_area()])
        if k < nsteps:
            st = step(st, cfg["ellipse_dt"])
    tr = np.array(t_rows)
    fitted = float(np.polyfit(tr[:, 0], tr[:, 1], 1)[0])
    checks.add("Kirchhoff rotation rate", fitted, [rate * 0.99, rate * 1.01], abs(fitted / rate - 1) < 0.01)
    adrift = float(np.max(np.abs(tr[:, 2] - tr[0, 2])) / tr[0, 2])
    checks.add("ellipse area drift", adrift, 1e-4, adrift < 1e-4)
    write_csv(out / "ellipse_rotation.csv", ["t", "orientation", "area"], t_rows)
    write_csv(out / "validate.csv", ["check", "index", "error"], rows)
    return {"status": "ok"}


HANDLERS = {"angles": cmd_angles, "equilibria": cmd_equilibria, "cusp": cmd_cusp,
            "portrait": cmd_portrait, "spiral": cmd_spiral, "validate": cmd_validate}


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="sectorflow", description="Sector-angle dynamics and vortex-patch scenarios.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=f"run the {name} scenario")
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--config", help="JSON scenario file")
        src.add_argument("--preset", help="bundled scenario name (see list-presets)")
        sp.add_argument("--out", help="output directory (default: $SECTORFLOW_OUT or ./sectorflow-out)")
        sp.add_argument("--threads", type=int, default=1, help="worker threads (the numerics are single-threaded)")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
        sp.add_argument("--snapshot-every", type=int, default=None, help="contour snapshot cadence in samples")
    sub.add_parser("list-presets", help="print the bundled scenarios")
    return p


def run(command, config=None, preset=None, out=None, threads=1, seed=0, snapshot_every=None):
    """Programmatic entry point; returns the exit code."""
    argv = [command]
    for flag, v in (("--config", config), ("--preset", preset), ("--out", out), ("--threads", threads),
                    ("--seed", seed), ("--snapshot-every", snapshot_every)):
        if v is not None:
            argv += [flag, str(v)]
    return main(argv)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list-presets":
        print(list_presets())
        return EXIT_OK

    out = Path(args.out or os.environ.get("SECTORFLOW_OUT") or "sectorflow-out")
    out.mkdir(parents=True, exist_ok=True)
    checks = Checks()
    manifest = {"command": args.command, "preset": args.preset, "config_path": args.config,
                "version": __version__, "backend": kernels.BACKEND, "python": platform.python_version(),
                "numpy": np.__version__, "threads": args.threads, "seed": args.seed}
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        if args.threads < 1:
            raise ConfigError("flag '--threads': must be >= 1")
        if args.snapshot_every is not None and args.snapshot_every < 0:
            raise ConfigError("flag '--snapshot-every': must be >= 0")
        if args.preset:
            if args.preset not in PRESETS:
                raise ConfigError(f"unknown preset '{args.preset}' (see list-presets)")
            preset = PRESETS[args.preset]
            if preset["command"] != args.command:
                raise ConfigError(f"preset '{args.preset}' belongs to command '{preset['command']}'")
            raw = preset["config"]
        elif args.config:
            raw = load_config_file(args.config)
        else:
            raw = {}
        cfg = resolve_config(args.command, raw)
        manifest["config"] = cfg
        result = HANDLERS[args.command](cfg, out, args, checks)
        manifest["result"] = result
        code = EXIT_OK if checks.all_passed else EXIT_CHECKS
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        manifest["error"] = str(exc)
        code = EXIT_CONFIG
    except Halted as exc:
        print(f"numerical halt: {exc}", file=sys.stderr)
        manifest["error"] = str(exc)
        code = EXIT_HALT
    finally:
        manifest["wall_time_s"] = time.perf_counter() - t0
        manifest["checks"] = checks.items
        manifest["exit_code"] = code
        manifest["artifacts"] = sorted(str(p.relative_to(out)) for p in out.rglob("*")
                                       if p.is_file() and p.name != "manifest.json")
        write_json(out / "manifest.json", manifest)
    for c in checks.items:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}: {c['value']}")
    return code


if __name__ == "__main__":
    sys.exit(main())
