"""Backend selection: compiled core if available, pure Python otherwise.

Set LIFTSAMPLER_BACKEND=py (or =c) to force a backend; the default prefers
the compiled extension.
"""
from __future__ import annotations

import os

from . import _purecore


def _select():
    choice = os.environ.get("LIFTSAMPLER_BACKEND", "").lower()
    if choice in ("py", "python", "pure"):
        return _purecore
    try:
        from . import _core
    except ImportError:
        if choice in ("c", "compiled"):
            raise ImportError(
                "LIFTSAMPLER_BACKEND requested the compiled core but "
                "liftsampler._core is not built"
            )
        return _purecore
    return _core


kernels = _select()


def backend_name():
    return "compiled" if kernels.COMPILED else "pure-python"
