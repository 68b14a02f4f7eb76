"""Test-session setup.

BLAS threading is pinned to one thread per process before numpy loads:
sweep worker processes then never oversubscribe the machine, and every
floating-point reduction order is fixed for the whole session.
"""

import os
import sys

if "numpy" not in sys.modules:
    for _var in (
        "OPENBLAS_NUM_THREADS",
        "OMP_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ.setdefault(_var, "1")
