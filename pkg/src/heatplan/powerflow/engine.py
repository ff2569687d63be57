"""Kernel selection: compiled Newton-Raphson core with pure-Python fallback.

Set HEATPLAN_PF_KERNEL=python to force the fallback (used by the benchmark
and by tests that compare both implementations).
"""

from __future__ import annotations

import os

from . import _nr_py

if os.environ.get("HEATPLAN_PF_KERNEL", "").lower() == "python":
    _kernel = _nr_py
    KERNEL = "python"
else:
    try:
        from . import _nr_cy as _kernel  # type: ignore[no-redef]

        KERNEL = "compiled"
    except ImportError:
        _kernel = _nr_py
        KERNEL = "python"

solve_snapshot = _kernel.solve_snapshot
calc_injections = _kernel.calc_injections
