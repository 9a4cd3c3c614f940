"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``SECRETPI_PURE=1`` to force the pure-Python kernels.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("SECRETPI_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

tau_closure = _impl.tau_closure
saturate = _impl.saturate
refine = _impl.refine
