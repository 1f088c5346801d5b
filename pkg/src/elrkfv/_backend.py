"""Kernel backend selection.

The hot reconstruction kernels exist twice: a numba-compiled version and
a pure-numpy fallback. Selection order:

* ``ELRKFV_BACKEND=numpy`` forces the fallback,
* ``ELRKFV_BACKEND=numba`` requires numba (ImportError if missing),
* unset: numba if importable, numpy otherwise.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

_requested = os.environ.get("ELRKFV_BACKEND", "").strip().lower()

if _requested == "numpy":
    kernels = _kernels_numpy
    BACKEND = "numpy"
elif _requested == "numba":
    from . import _kernels_numba as kernels

    BACKEND = "numba"
elif _requested == "":
    try:
        from . import _kernels_numba as kernels

        BACKEND = "numba"
    except ImportError:
        kernels = _kernels_numpy
        BACKEND = "numpy"
else:
    raise RuntimeError(f"unknown ELRKFV_BACKEND={_requested!r} (use 'numba' or 'numpy')")

# basis evaluation helpers are cheap and shared with the fallback module
basis_values = _kernels_numpy.basis_values
eval_poly = _kernels_numpy.eval_poly
antideriv = _kernels_numpy.antideriv
