"""Kernel backend selection.

The compiled extension ``charsum._kernels`` is used when it imports; otherwise the
numpy implementations in ``charsum._pykernels`` take over. Set
``CHARSUM_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

python = _pykernels

if os.environ.get("CHARSUM_PURE_PYTHON", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _kernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else _pykernels
BACKEND = "cython" if compiled is not None else "python"

power_table = _impl.power_table
residue_exponents = _impl.residue_exponents
level_counts = _impl.level_counts
level_stats_batch = _impl.level_stats_batch
prefix_max_powers = _impl.prefix_max_powers
prefix_max_batch = _impl.prefix_max_batch
multiplicative_exponents = _impl.multiplicative_exponents
additive_counts = _impl.additive_counts
kahan_cumsum = _impl.kahan_cumsum

__all__ = [
    "BACKEND",
    "additive_counts",
    "compiled",
    "kahan_cumsum",
    "level_counts",
    "level_stats_batch",
    "multiplicative_exponents",
    "power_table",
    "prefix_max_batch",
    "prefix_max_powers",
    "python",
    "residue_exponents",
]
