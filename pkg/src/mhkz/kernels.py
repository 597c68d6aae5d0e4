"""Backend selection: compiled kernels when available, NumPy fallback otherwise.

Set MHKZ_PURE=1 in the environment to force the fallback; mhkz.kernels.BACKEND
reports which implementation is active.
"""

import os

from mhkz import _pykernels

if os.environ.get("MHKZ_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from mhkz import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.backend_name()
kaczmarz_sweep = _impl.kaczmarz_sweep
evaluate_many = _impl.evaluate_many
