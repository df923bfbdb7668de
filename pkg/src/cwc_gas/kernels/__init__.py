"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled Cython module is preferred when importable; set the
CWC_GAS_BACKEND environment variable to "compiled" or "python" to force a
choice. Both implementations consume random draws in lockstep, so results
are bit-identical across backends.
"""

from __future__ import annotations

import os
from types import ModuleType

from ..errors import ParameterError


def get_backend(name: str | None = None) -> ModuleType:
    """Return the kernel module for `name` (None or "auto" = active default)."""
    if name in (None, "auto"):
        return active
    if name == "python":
        from . import pyfallback

        return pyfallback
    if name == "compiled":
        try:
            from . import _compiled
        except ImportError as exc:
            raise ParameterError("compiled kernels are not available") from exc
        return _compiled
    raise ParameterError(f"unknown backend {name!r}")


def _select_default() -> ModuleType:
    requested = os.environ.get("CWC_GAS_BACKEND", "auto")
    if requested != "auto":
        return get_backend(requested)
    try:
        from . import _compiled

        return _compiled
    except ImportError:
        from . import pyfallback

        return pyfallback


active = _select_default()
BACKEND_NAME: str = active.NAME
