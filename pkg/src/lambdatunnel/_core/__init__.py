"""Numerical kernels.

The compiled ``_rk4`` extension is used when it has been built; otherwise the
pure-Python implementation in ``_rk4_py`` is selected. Setting the environment
variable ``LAMBDATUNNEL_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _rk4_py

BACKEND = "python"
rk4_run = _rk4_py.rk4_run

if os.environ.get("LAMBDATUNNEL_PURE_PYTHON", "") in ("", "0"):
    try:
        from ._rk4 import rk4_run  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"

__all__ = ["BACKEND", "rk4_run"]
