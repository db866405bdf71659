"""Select compiled or pure-Python kernels at import time.

The compiled extension is preferred when importable; set the environment
variable ``QPGREEN_PURE=1`` to force the numpy fallback (used by the
benchmark and by tests that compare both paths).
"""

import os

from . import kernels_py

_force_pure = os.environ.get("QPGREEN_PURE", "0") not in ("", "0")

if not _force_pure:
    try:
        from . import _kernels as _impl
        IMPLEMENTATION = "compiled"
    except ImportError:
        _impl = kernels_py
        IMPLEMENTATION = "python"
else:
    _impl = kernels_py
    IMPLEMENTATION = "python"

interp2 = _impl.interp2
interp3 = _impl.interp3
crc64 = _impl.crc64
