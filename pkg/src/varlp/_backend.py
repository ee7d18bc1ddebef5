"""Kernel selection.

The compiled kernels are used when the extension was built; otherwise the
NumPy fallback is used. Set ``VARLP_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:
    compiled_kernels = None

python_kernels = _pykernels

if compiled_kernels is None or os.environ.get("VARLP_PURE_PYTHON", "") not in ("", "0"):
    kernels = _pykernels
else:
    kernels = compiled_kernels

NAME = "compiled" if kernels is compiled_kernels else "python"


def available():
    """Names of the kernel implementations importable in this process."""
    names = ["python"]
    if compiled_kernels is not None:
        names.append("compiled")
    return names


def get(name):
    if name == "python":
        return _pykernels
    if name == "compiled":
        if compiled_kernels is None:
            raise ImportError("compiled kernels are not built")
        return compiled_kernels
    raise ValueError(f"unknown kernel backend {name!r}")
