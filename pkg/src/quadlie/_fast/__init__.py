"""Mod-p kernel backend selection.

The compiled extension is used when present; otherwise the pure kernels.
Set QUADLIE_FORCE_PURE=1 to skip the extension regardless.
"""

import os

if os.environ.get("QUADLIE_FORCE_PURE"):
    from . import pure as _impl
else:
    try:
        from . import _fpcore as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as _impl

BACKEND = _impl.BACKEND
fp_rref = _impl.fp_rref
fp_matmul = _impl.fp_matmul
