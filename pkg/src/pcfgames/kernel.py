"""Select the interaction kernel: compiled if available, else pure Python.

Set ``PCFGAMES_PURE=1`` to force the Python kernel.
"""
from __future__ import annotations

import os

from . import _kernel_py
from ._kernel_py import KernelBudgetExceeded

BACKEND = "python"
compose_views = _kernel_py.compose_views
first_response = _kernel_py.first_response

if not os.environ.get("PCFGAMES_PURE"):
    try:
        from . import _kernel_c  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        compose_views = _kernel_c.compose_views
        first_response = _kernel_c.first_response
        BACKEND = "cython"

__all__ = ["BACKEND", "compose_views", "first_response", "KernelBudgetExceeded"]
