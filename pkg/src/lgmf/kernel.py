"""Kernel backend selection: compiled extension when built, pure Python otherwise.

Set LGMF_PURE=1 to force the pure-Python kernels (used by the benchmark and to
cross-check both backends in the test suite).
"""

import os

if os.environ.get("LGMF_PURE"):
    from . import _kernel_py as backend
else:
    try:
        from . import _kernel_cy as backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as backend

BACKEND = backend.BACKEND
terms_add = backend.terms_add
terms_mul = backend.terms_mul
terms_scale = backend.terms_scale
terms_mul_term = backend.terms_mul_term
