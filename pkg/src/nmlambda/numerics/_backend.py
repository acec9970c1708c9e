"""Kernel backend selection.

The compiled extension is used when importable, unless the environment
variable ``NMLAMBDA_PURE_PYTHON`` is set to a non-empty value other than 0.
"""
import os

from . import _pykernels

pykernels = _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

ckernels = _ckernels

if _ckernels is not None and os.environ.get("NMLAMBDA_PURE_PYTHON", "0") in ("", "0"):
    kernels = _ckernels
    BACKEND = "cython"
else:
    kernels = _pykernels
    BACKEND = "python"
