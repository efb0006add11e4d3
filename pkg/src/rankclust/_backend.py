"""Pick the compiled kernels when importable, else the pure-Python ones."""

from __future__ import annotations

import os

from . import _fallback

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

_FORCE_PURE = os.environ.get("RANKCLUST_PURE_PYTHON", "").strip() not in ("", "0")

BACKENDS = {"python": _fallback}
if _kernels is not None:
    BACKENDS["cython"] = _kernels

DEFAULT = "python" if _FORCE_PURE or _kernels is None else "cython"


def get(name: str | None = None):
    name = DEFAULT if name is None else name
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
