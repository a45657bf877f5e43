import json
import math

import numpy as np

from sectorflow import io


def test_fmt_round_trips_floats():
    for v in (math.pi, 1e-300, -2.5e17, 0.1):
        assert float(io.fmt(v)) == v
    assert io.fmt(True) == "1"
    assert io.fmt(np.int64(7)) == "7"
    assert io.fmt("x") == "x"


def test_write_csv(tmp_path):
    p = io.write_csv(tmp_path / "sub" / "a.csv", ["t", "x"], [[0.0, 1 / 3], [1, np.float64(2.0)]])
    assert p.read_text() == "t,x\n0,0.33333333333333331\n1,2\n"


def test_write_json_handles_numpy_and_nonfinite(tmp_path):
    p = io.write_json(tmp_path / "a.json", {"b": np.arange(2), "a": np.float64("nan"), "c": np.bool_(True)})
    assert json.loads(p.read_text()) == {"a": "nan", "b": [0, 1], "c": True}


def test_svg_writers(tmp_path):
    th = np.linspace(0, 2 * math.pi, 20)
    pts = np.column_stack([np.cos(th), np.sin(th)])
    io.contours_svg(tmp_path / "c.svg", [(0.0, pts), (1.0, 0.5 * pts)], copies=4)
    io.series_svg(tmp_path / "s.svg", th, [np.sin(th)], ["sin"], "title")
    Z = np.tile(np.linspace(0, 1, 4), (4, 1))
    labels = np.full((4, 4), "undecided")
    io.portrait_svg(tmp_path / "p.svg", Z, Z.T, labels, Z, Z.T)
    for name in ("c.svg", "s.svg", "p.svg"):
        text = (tmp_path / name).read_text()
        assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
