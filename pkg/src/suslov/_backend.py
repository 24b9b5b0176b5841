"""Backend selection: compiled kernels when importable, pure python otherwise.

Set SUSLOV_PURE_PYTHON=1 to force the fallback (used by the benchmark and by
cross-backend tests).
"""
import os

from . import _purepy

if os.environ.get("SUSLOV_PURE_PYTHON"):
    impl = _purepy
    BACKEND = "python"
else:
    try:
        from . import _kernels as impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        impl = _purepy
        BACKEND = "python"


def backend_name() -> str:
    return BACKEND
