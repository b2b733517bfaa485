"""Select the backward-sweep kernel: compiled extension if built, numpy otherwise."""

from __future__ import annotations

from ..errors import ConfigurationError
from . import _dp_fallback

try:
    from . import _dp_kernel
except ImportError:  # extension not built
    _dp_kernel = None

COMPILED_AVAILABLE = _dp_kernel is not None
BACKENDS = ("auto", "compiled", "python")


def get_backward_sweep(backend: str = "auto"):
    if backend not in BACKENDS:
        raise ConfigurationError(f"backend must be one of {BACKENDS}, got {backend!r}")
    if backend == "python" or (backend == "auto" and not COMPILED_AVAILABLE):
        return _dp_fallback.backward_sweep
    if not COMPILED_AVAILABLE:
        raise ConfigurationError("compiled DP kernel requested but the extension is not built")
    return _dp_kernel.backward_sweep


def active_backend() -> str:
    return "compiled" if COMPILED_AVAILABLE else "python"
