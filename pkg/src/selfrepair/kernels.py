"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when
``SELFREPAIR_BACKEND=python`` is set, the pure-Python kernels take over.
Both expose ``count_recoverable``, ``simulate_one`` and ``run_campaign``
with identical semantics and bit-identical results.
"""

from __future__ import annotations

import os
from typing import NamedTuple

from . import _pykernel


class KernelPlan(NamedTuple):
    kind: int  # 0: GF(2) columns, 1: parity groups
    columns: tuple
    group_size: int
    group_tol: int
    n_positions: int
    spares: int  # -1 for an unlimited pool
    mission: float
    repair: float
    starts: tuple
    rates: tuple
    surv0: float  # probability a new disk outlives the mission
    mode: int  # 0: exact, 1: profile
    n_f: int
    ratios: tuple
    policy: int  # 0: continue unrepaired, 1: immediate loss


def _load():
    if os.environ.get("SELFREPAIR_BACKEND", "").lower() == "python":
        return _pykernel
    try:
        from . import _ckernel
    except ImportError:
        return _pykernel
    return _ckernel


backend = _load()
BACKEND = backend.NAME
python = _pykernel


def count_recoverable(kind, columns, group_size, group_tol, n_positions, max_size):
    # the compiled DFS uses 64-bit columns
    if kind == 0 and columns and max(columns) >> 64:
        return _pykernel.count_recoverable(kind, columns, group_size, group_tol, n_positions, max_size)
    return backend.count_recoverable(kind, columns, group_size, group_tol, n_positions, max_size)


def for_plan(plan: KernelPlan):
    if plan.kind == 0 and plan.columns and max(plan.columns) >> 64:
        return _pykernel
    return backend
