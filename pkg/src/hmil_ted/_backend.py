"""Kernel selection.

The compiled kernel is picked at import when it was built and not disabled
with ``HMIL_TED_PURE_PYTHON=1``. Per forest, it is only used when all costs
are exact in double precision; otherwise the pure-Python kernel runs with
exact rational arithmetic.
"""

from __future__ import annotations

import os

from ._kernel_py import PyKernel
from .forest import Forest

try:
    from ._ckernel import CKernel
except ImportError:  # extension not built
    CKernel = None

COMPILED_AVAILABLE = CKernel is not None
USE_COMPILED = COMPILED_AVAILABLE and os.environ.get("HMIL_TED_PURE_PYTHON", "") not in ("1", "true", "yes")


class CompiledKernel:
    """Adapter giving the compiled kernel the exact-number interface."""

    def __init__(self, forest: Forest, arrays: dict | None = None):
        self.forest = forest
        self.arrays = forest.freeze() if arrays is None else arrays
        self.impl = CKernel(self.arrays)

    def sibling(self) -> "CompiledKernel":
        """Another kernel over the same frozen arrays, with its own memo."""
        return CompiledKernel(self.forest, self.arrays)

    def distance(self, a: int, b: int) -> int:
        return int(self.impl.distance(a, b))

    def fill_rows(self, ids, rows) -> dict[int, list]:
        import numpy as np

        ids_arr = np.ascontiguousarray(ids, dtype=np.int32)
        rows_arr = np.ascontiguousarray(rows, dtype=np.int32)
        out = np.zeros((len(ids), len(ids)), dtype=np.float64)
        self.impl.fill_rows(ids_arr, rows_arr, out)
        return {i: [int(x) for x in out[i, i + 1 :]] for i in rows}


# below this many interned nodes the compiled kernel's setup outweighs its speed
SMALL_FOREST = 64


def make_kernel(forest: Forest, backend: str | None = None):
    """Kernel for ``forest``; ``backend`` forces ``"python"`` or ``"compiled"``."""
    if backend == "python":
        return PyKernel(forest)
    if backend == "compiled":
        if not COMPILED_AVAILABLE:
            raise RuntimeError("compiled kernel is not built")
        if not forest.float_exact:
            raise ValueError("cost model is not exact in double precision")
        return CompiledKernel(forest)
    if USE_COMPILED and len(forest) >= SMALL_FOREST and forest.float_exact:
        return CompiledKernel(forest)
    return PyKernel(forest)
