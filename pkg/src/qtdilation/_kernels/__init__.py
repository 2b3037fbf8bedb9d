"""Hot loops of the Page-Wootters oracle.

The compiled core is used when it was built; otherwise, or when
``QTDILATION_PURE_PYTHON`` is set to a non-empty value, the numpy version is
used. Both expose ``reading_series`` and ``projected_series``.
"""
import os

from . import _pwcore_py as python_backend

compiled_backend = None
if not os.environ.get("QTDILATION_PURE_PYTHON"):
    try:
        from . import _pwcore as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend

BACKEND = "cython" if _active is compiled_backend else "python"
reading_series = _active.reading_series
projected_series = _active.projected_series

__all__ = ["BACKEND", "reading_series", "projected_series", "python_backend", "compiled_backend"]
