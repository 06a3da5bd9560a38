"""Kernel backend selection.

The compiled Cython kernels are used when present; the pure-numpy
module is the fallback.  SATRACK_KERNELS=py|cy|auto overrides the
choice (cy errors out if the extension is missing, so tests can pin a
backend).  Both backends produce bit-identical results.
"""

import os

from . import _kernels_py

_choice = os.environ.get("SATRACK_KERNELS", "auto").lower()

if _choice == "py":
    kernels = _kernels_py
elif _choice == "cy":
    from . import _kernels_cy as kernels  # raises ImportError if not built
else:
    try:
        from . import _kernels_cy as kernels
    except ImportError:
        kernels = _kernels_py


def backend_name() -> str:
    return kernels.BACKEND_NAME


def available_backends():
    names = ["python"]
    try:
        from . import _kernels_cy  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    return names
