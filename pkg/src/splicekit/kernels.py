"""Backend selection for the free-group kernels.

The compiled extension is used when it was built; setting the environment
variable ``SPLICEKIT_PURE_PYTHON=1`` forces the pure-Python version.
"""

import os

from . import _pykernels

python_backend = _pykernels

if os.environ.get("SPLICEKIT_PURE_PYTHON", "") not in ("", "0"):
    compiled_backend = None
else:
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else _pykernels

BACKEND = backend.BACKEND
free_reduce = backend.free_reduce
substitute = backend.substitute
probe = backend.probe

__all__ = ["BACKEND", "free_reduce", "substitute", "probe", "python_backend", "compiled_backend"]
