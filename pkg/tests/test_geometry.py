import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import Point, Polygon

from sectorflow.contour import geometry as G


def spiral(turns, n=1000):
    th = np.linspace(0, 2 * math.pi * turns, n)
    r = th / (2 * math.pi * turns)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


def square(c=(0.0, 0.0), h=1.0):
    x, y = c
    return np.array([[x - h, y - h], [x + h, y - h], [x + h, y + h], [x - h, y + h]])


def test_area_and_perimeter_of_square():
    assert G.signed_area(square()) == 4.0
    assert G.signed_area(square()[::-1]) == -4.0
    assert G.perimeter(square()) == 8.0
    assert G.perimeter(square(), closed=False) == 6.0


def test_rotate_is_counterclockwise():
    assert np.allclose(G.rotate(np.array([[1.0, 0.0]]), math.pi / 2), [[0.0, 1.0]])


@pytest.mark.parametrize("c,h", [((0, 0), 0.5), ((0.7, 0.2), 0.6), ((2.5, 0), 0.3), ((0.4, -0.3), 2.0)])
def test_disk_intersection_matches_shapely(c, h):
    poly = square(c, h)
    ref = Polygon(poly).intersection(Point(0, 0).buffer(1.0, 4096)).area
    assert G.disk_intersection_area(poly) == pytest.approx(ref, abs=2e-6)


def test_disk_polygon_diagnostics():
    th = np.linspace(0, 2 * math.pi, 1024, endpoint=False)
    scale = math.sqrt(2 * math.pi / (1024 * math.sin(2 * math.pi / 1024)))
    disk = scale * np.column_stack([np.cos(th), np.sin(th)])
    assert abs(G.signed_area(disk) - math.pi) < 1e-5
    assert abs(G.perimeter(disk) - 2 * math.pi) < 1e-4
    assert G.l1_distance_to_disk(disk) < 1e-4


def test_l1_distance_of_offset_square():
    poly = square((3.0, 0.0), 0.5)
    assert G.l1_distance_to_disk(poly) == pytest.approx(1.0 + math.pi)


def test_curvature_of_circle():
    th = np.linspace(0, 2 * math.pi, 400, endpoint=False)
    k = G.discrete_curvature(2.0 * np.column_stack([np.cos(th), np.sin(th)]))
    assert np.allclose(k, 0.5, rtol=1e-4)


def test_orientation_of_ellipse():
    th = np.linspace(0, 2 * math.pi, 400, endpoint=False)
    pts = G.rotate(np.column_stack([2 * np.cos(th), np.sin(th)]), 0.3)
    assert G.orientation_angle(pts) == pytest.approx(0.3, abs=1e-10)


# --- winding numbers --------------------------------------------------------

def test_radial_segment_has_no_winding():
    ray = np.column_stack([np.linspace(0, 1, 10), np.zeros(10)])
    assert abs(G.winding_number(ray)) < 1e-15
    assert G.line_intersections(ray, math.pi / 2) == 0


def test_archimedean_spiral_winds_three_times():
    c = spiral(3.0)
    assert G.winding_number(c) == pytest.approx(3.0, abs=1e-3)
    for d in math.pi * np.arange(8) / 8:
        assert G.line_intersections(c, d) >= 3


def test_winding_rejects_bad_curves():
    with pytest.raises(ValueError):
        G.winding_number(np.array([[1.0, 0.0], [2.0, 0.0]]))
    with pytest.raises(ValueError):
        G.winding_number(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]))


def test_duplicate_nodes_are_collapsed():
    c = spiral(1.5, 200)
    doubled = np.repeat(c, 2, axis=0)
    assert G.winding_number(doubled) == G.winding_number(c)


def test_fit_ray_direction():
    r = np.linspace(0.01, 0.02, 5)[:, None]
    pts = r * np.array([[math.cos(2.0), math.sin(2.0)]])
    assert G.fit_ray_direction(pts) == pytest.approx(2.0)


def random_walk(draw_incs, radii):
    th = np.cumsum(draw_incs)
    return np.column_stack([radii * np.cos(th), radii * np.sin(th)])


incs = st.lists(st.floats(-2.5, 2.5), min_size=2, max_size=60)


@settings(max_examples=100, deadline=None)
@given(incs, st.integers(0, 2 ** 32 - 1))
def test_swept_angle_adds_and_negates(steps, seed):
    rng = np.random.default_rng(seed)
    pts = random_walk(np.array(steps), rng.uniform(0.1, 2.0, len(steps)))
    k = len(pts) // 2
    whole = G.angle_swept(pts)
    assert whole == pytest.approx(G.angle_swept(pts[:k + 1]) + G.angle_swept(pts[k:]), abs=1e-12)
    assert G.angle_swept(pts[::-1]) == pytest.approx(-whole, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(incs, st.integers(0, 2 ** 32 - 1))
def test_winding_additive_under_concatenation(steps, seed):
    rng = np.random.default_rng(seed)
    pts = random_walk(np.array(steps), np.sort(rng.uniform(0.1, 2.0, len(steps))))
    head = np.vstack([[0.0, 0.0], pts[:len(pts) // 2 + 1]])
    tail = pts[len(pts) // 2:]
    full = np.vstack([[0.0, 0.0], pts])
    assert G.winding_number(full) == pytest.approx(G.winding_number(head) + G.angle_swept(tail), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(incs, st.integers(0, 2 ** 32 - 1), st.floats(0, math.pi))
def test_line_crossings_bound_the_winding(steps, seed, direction):
    rng = np.random.default_rng(seed)
    pts = np.vstack([[0.0, 0.0], random_walk(np.array(steps), rng.uniform(0.1, 2.0, len(steps)))])
    assert G.line_intersections(pts, direction) >= math.floor(G.winding_number(pts))
