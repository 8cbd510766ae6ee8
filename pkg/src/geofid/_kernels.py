"""Kernel selection: compiled Jacobi core if importable, else pure Python.

Set ``GEOFID_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _jacobi_py

BACKEND = "python"
jacobi_eigh = _jacobi_py.jacobi_eigh

if os.environ.get("GEOFID_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._jacobi import jacobi_eigh  # noqa: F811
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        BACKEND = "compiled"

__all__ = ["BACKEND", "jacobi_eigh"]
