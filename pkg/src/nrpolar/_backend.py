"""Selects the compiled core when available.

Set ``NRPOLAR_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pycore

if os.environ.get("NRPOLAR_PURE_PYTHON"):
    core = _pycore
else:
    try:
        from . import _core as core
    except ImportError:
        core = _pycore

IMPLEMENTATION = core.IMPLEMENTATION
