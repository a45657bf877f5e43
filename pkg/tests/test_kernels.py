import math

import numpy as np
import pytest

from sectorflow import kernels
from sectorflow.contour.state import disk_contour


def test_backend_is_selected():
    assert kernels.BACKEND in kernels.backends()


def call(mod, loop, targets):
    loop = np.asarray(loop, dtype=float)
    starts = np.array([0, len(loop)], dtype=np.intp)
    ux, uy = mod.loop_velocity(np.ascontiguousarray(loop[:, 0]), np.ascontiguousarray(loop[:, 1]), starts,
                               np.array([1.0]), np.ascontiguousarray(targets[:, 0]),
                               np.ascontiguousarray(targets[:, 1]))
    return np.column_stack([ux, uy])


def test_loop_velocity_backends_agree(rng):
    loops = disk_contour(200).nodes * np.array([1.3, 0.8])
    targets = np.vstack([rng.uniform(-3, 3, (50, 2)), loops[::7], 20 * rng.normal(size=(5, 2))])
    ref = call(kernels.backends()["python"], loops, targets)
    for name, mod in kernels.backends().items():
        v = call(mod, loops, targets)
        assert np.max(np.abs(v - ref)) < 1e-13, name


def test_loop_velocity_disk(backend):
    c = disk_contour(512)
    v = call(backend, c.nodes, np.array([[0.5, 0.0], [0.0, 3.0]]))
    assert np.allclose(v[0], [0.0, 0.25], atol=1e-5)
    assert np.allclose(v[1], [-math.pi / (2 * math.pi * 3.0), 0.0], rtol=1e-5)


def test_one_dim_backends_agree(backend):
    g0 = np.linspace(0.05, 0.7, 5)
    ref = kernels.backends()["python"].rk4_one_dim(g0, 1.0, 1e-2, 300, 30)
    assert np.max(np.abs(backend.rk4_one_dim(g0, 1.0, 1e-2, 300, 30) - ref)) < 1e-14
