"""Hot-path kernels with a compiled core and a NumPy fallback.

The compiled extension (``_core``, built from Cython) is preferred; if it is
absent or ``THERMOTRACK_PURE_PYTHON=1`` is set, the NumPy implementation in
``_py`` is used instead. Both expose the same three functions with identical
semantics:

- ``label_components(mask) -> (labels, count)``
- ``otsu_threshold(hist) -> threshold or -1``
- ``bilinear_resize(src, out_h, out_w) -> array``
"""

import os

from . import _py

if os.environ.get("THERMOTRACK_PURE_PYTHON", "") not in ("", "0"):
    _impl = _py
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _py

IMPLEMENTATION = "compiled" if _impl is not _py else "python"

label_components = _impl.label_components
otsu_threshold = _impl.otsu_threshold
bilinear_resize = _impl.bilinear_resize

__all__ = ["label_components", "otsu_threshold", "bilinear_resize", "IMPLEMENTATION"]
