"""Kernel backend selection: compiled extension when built, numpy fallback otherwise."""
from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None


def available_backends() -> tuple[str, ...]:
    if _compiled is not None:
        return ("compiled", "python")
    return ("python",)


def resolve(name: str | None = None):
    """Return (kernel module, backend name).

    name None picks the compiled extension when available, honoring the
    BALANCED_KCENTER_BACKEND environment variable as a default override.
    """
    if name is None:
        name = os.environ.get("BALANCED_KCENTER_BACKEND")
    if name is None:
        name = "compiled" if _compiled is not None else "python"
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled backend requested but the extension is not built")
        return _compiled, "compiled"
    if name == "python":
        return _kernels_py, "python"
    raise ValueError(f"unknown backend {name!r}")
