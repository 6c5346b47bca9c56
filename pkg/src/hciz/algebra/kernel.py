"""Select the series multiplication kernel at import time.

The compiled extension is used when it was built; setting the environment
variable ``HCIZ_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

BACKEND = "python"

if os.environ.get("HCIZ_PURE_PYTHON", "") not in ("", "0"):
    from ._kernel_py import axpy_block, mul_block, mul_blocks
else:
    try:
        from ._kernel import axpy_block, mul_block, mul_blocks

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernel_py import axpy_block, mul_block, mul_blocks

__all__ = ["BACKEND", "axpy_block", "mul_block", "mul_blocks"]
