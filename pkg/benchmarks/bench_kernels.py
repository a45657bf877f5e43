"""Compiled vs pure-Python kernels on the workloads the simulations actually run.

    python benchmarks/bench_kernels.py [--repeat 5]

Reports the best-of-``repeat`` wall time per call for each backend and the
largest difference between their outputs.
"""
import argparse
import math
import time

import numpy as np

from sectorflow import kernels
from sectorflow.contour.patches import build_spiral_patch


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    state = build_spiral_patch()
    nx, ny, starts, w = state.source_loops()
    c = state.contours[0].nodes
    tx, ty = np.ascontiguousarray(c[:, 0]), np.ascontiguousarray(c[:, 1])
    n = len(nx)
    yield (f"contour velocity, {n} sources x {len(tx)} targets",
           lambda mod: np.column_stack(mod.loop_velocity(nx, ny, starts, w, tx, ty)))

    axis = np.linspace(0.0, math.pi / 4, 32)
    Z2, G = np.meshgrid(axis, axis)
    y0 = np.ascontiguousarray(np.column_stack([(math.pi / 4 - Z2).ravel(), Z2.ravel(), G.ravel()]))
    yield ("reduced RK4, 1024 initial states x 6000 steps",
           lambda mod: mod.rk4_reduced(y0, 1e-2, 6000, 6000))

    g0 = np.ascontiguousarray(np.linspace(0.01, math.pi / 4 - 0.01, 50))
    yield ("gap RK4, 50 initial states x 20000 steps",
           lambda mod: mod.rk4_one_dim(g0, 1.0, 1e-2, 20000, 20000))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    mods = kernels.backends()
    if "compiled" not in mods:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'workload':<50} " + " ".join(f"{name:>12}" for name in mods) + "   speedup   max |diff|")
    for label, fn in workloads():
        times, outs = {}, {}
        for name, mod in mods.items():
            times[name], outs[name] = best_of(lambda: fn(mod), args.repeat)
        row = f"{label:<50} " + " ".join(f"{times[n] * 1e3:10.2f}ms" for n in mods)
        if "compiled" in mods:
            diff = float(np.max(np.abs(outs["compiled"] - outs["python"])))
            row += f"   {times['python'] / times['compiled']:7.1f}x   {diff:.1e}"
        print(row)


if __name__ == "__main__":
    main()
