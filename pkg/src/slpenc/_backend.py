"""Pick the kernel implementation at import time.

The compiled ``_ckernels`` module is used when it imports; set
``SLPENC_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

if os.environ.get("SLPENC_PURE_PYTHON") == "1":
    from . import _pykernels as kernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        from . import _pykernels as kernels

BACKEND = kernels.BACKEND
RankSelect = kernels.RankSelect
PackedInts = kernels.PackedInts


def available_backends():
    """Return ``{name: module}`` for every kernel module that imports."""
    from . import _pykernels

    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
