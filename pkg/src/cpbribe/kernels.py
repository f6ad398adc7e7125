"""Backend selection for the hot kernels.

The compiled ``_speedups`` extension is used when it imports; otherwise the
pure-Python twin in ``_pykernels``. Set ``CPBRIBE_PURE_PYTHON=1`` to force
the fallback.
"""

import os

from cpbribe import _pykernels
from cpbribe._pykernels import NegativeCycleError  # noqa: F401

BACKENDS = {"python": _pykernels}

if os.environ.get("CPBRIBE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from cpbribe import _speedups
    except ImportError:  # extension not built
        _speedups = None
    else:
        BACKENDS["compiled"] = _speedups

BACKEND = "compiled" if "compiled" in BACKENDS else "python"
_impl = BACKENDS[BACKEND]


def use_backend(name):
    """Switch the active backend; returns the previous backend name."""
    global BACKEND, _impl
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    previous = BACKEND
    BACKEND = name
    _impl = BACKENDS[name]
    return previous


def k_smallest_masks(sizes, K):
    if len(sizes) > 63 and BACKEND == "compiled":
        return _pykernels.k_smallest_masks(sizes, K)
    return _impl.k_smallest_masks(sizes, K)


def knapsack_keep(weights, costs, capacity):
    return _impl.knapsack_keep(weights, costs, capacity)


def min_cost_flow(n_nodes, tails, heads, caps, costs, source, sink):
    return _impl.min_cost_flow(n_nodes, tails, heads, caps, costs, source, sink)
