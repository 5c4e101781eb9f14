"""Kernel backend chosen at import.

The Cython extension is used when it was built; otherwise, or when
``PLPDIM_PURE_PYTHON`` is set to a non-empty value, the NumPy versions are.
"""
import os

from . import _kernels_py

BACKEND = "python"
ccdf_trapezoid = _kernels_py.ccdf_trapezoid
chord_mass = _kernels_py.chord_mass

if not os.environ.get("PLPDIM_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        BACKEND = "cython"
        ccdf_trapezoid = _compiled.ccdf_trapezoid
        chord_mass = _compiled.chord_mass
