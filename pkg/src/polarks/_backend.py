"""Kernel backend selection.

The compiled extension accelerates the GF(2) elimination, the Gray-code
coset walk and the orbit expansion step.  Set POLARKS_PURE_PYTHON=1 to force
the pure Python kernels (used by the benchmark and the parity tests).
"""

import os

if os.environ.get("POLARKS_PURE_PYTHON"):
    core = None
else:
    try:
        from . import _core as core  # type: ignore[attr-defined]
    except ImportError:
        core = None

name = "compiled" if core is not None else "python"
