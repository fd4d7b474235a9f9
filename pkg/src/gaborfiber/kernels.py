"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``GABOR_FIBER_PUREPY`` is set to a non-empty value, the
numpy implementation is used.  ``BACKEND`` names the active choice.
"""
import os

from . import _kernels_py

if os.environ.get("GABOR_FIBER_PUREPY"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"

fold_product = _impl.fold_product
correlation_stack = _impl.correlation_stack
frame_matrix = _impl.frame_matrix
walnut_term = _impl.walnut_term

__all__ = ["BACKEND", "fold_product", "correlation_stack", "frame_matrix", "walnut_term"]
