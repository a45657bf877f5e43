"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the numpy
fallback takes over.  Setting ``SECTORFLOW_BACKEND=python`` forces the
fallback, which is how the test-suite and the benchmark compare the two.
"""
import os

from . import _fallback

if os.environ.get("SECTORFLOW_BACKEND", "").lower() == "python":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _fallback
        BACKEND = "python"

loop_velocity = _impl.loop_velocity
rk4_reduced = _impl.rk4_reduced
rk4_one_dim = _impl.rk4_one_dim


def backends():
    """Return ``{name: module}`` for every backend importable here."""
    out = {"python": _fallback}
    try:
        from . import _kernels
        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
