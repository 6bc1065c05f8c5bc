"""Backend selection for the integrator kernels.

The compiled Cython extension is preferred when it imports cleanly. Setting
the environment variable WINFREE_PURE_PYTHON to a nonempty value other than
"0" forces the numpy fallback, which is useful for benchmarking and for
debugging the kernels themselves.
"""

import os

__all__ = ["BACKEND", "backend_name", "euler_trajectory", "em_trajectory", "em_scan"]

_force_python = os.environ.get("WINFREE_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    from . import _ref as _impl
else:
    try:
        from . import _fast as _impl
    except ImportError:
        from . import _ref as _impl

BACKEND = _impl.BACKEND_NAME

euler_trajectory = _impl.euler_trajectory
em_trajectory = _impl.em_trajectory
em_scan = _impl.em_scan


def backend_name():
    """Name of the active kernel backend, "compiled" or "python"."""
    return BACKEND
