"""Backend selection for the hot numerical kernels.

``jacobi_eigh`` (Hermitian eigensolver) and ``singular_values`` come from
the compiled Cython core when it imports; otherwise, or when
``GENCOMM_PURE_PYTHON=1`` is set, from the numpy fallback in
:mod:`gencomm._jacobi_py`.  Both backends run the same rotation sequence.
"""

import os

from . import _jacobi_py

BACKEND = "python"
jacobi_eigh = _jacobi_py.jacobi_eigh
singular_values = _jacobi_py.singular_values

if not os.environ.get("GENCOMM_PURE_PYTHON"):
    try:
        from ._jacobi import jacobi_eigh, singular_values  # noqa: F811
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        BACKEND = "cython"


def available_backends():
    """Map backend name to its kernel module for every importable backend."""
    out = {"python": _jacobi_py}
    try:
        from . import _jacobi
    except ImportError:  # pragma: no cover
        pass
    else:
        out["cython"] = _jacobi
    return out
