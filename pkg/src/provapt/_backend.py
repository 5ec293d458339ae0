"""Kernel selection.

The compiled kernels are used when the extension is built, unless
``PROVAPT_PURE_PYTHON`` is set to a non-empty value.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and not os.environ.get("PROVAPT_PURE_PYTHON"):
    default = _ckernels
else:
    default = _pykernels


def get(name=None):
    """Return the kernel module called ``name``, or the default one."""
    if name is None:
        return default
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {sorted(BACKENDS)}") from None
