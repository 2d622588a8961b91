"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise
the pure-Python ``_pykernels`` module takes over. Setting the environment
variable ``HEUNREG_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("HEUNREG_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

recurrence_fill = _impl.recurrence_fill
series_sum = _impl.series_sum
taylor_coeffs = _impl.taylor_coeffs
continue_path = _impl.continue_path
geometric_tail = _pykernels.geometric_tail

__all__ = ["BACKEND", "recurrence_fill", "series_sum", "taylor_coeffs",
           "continue_path", "geometric_tail"]
