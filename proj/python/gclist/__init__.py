"""Concurrent ordered sets with built-in garbage collection by node recycling.

The heavy lifting lives in the `_gclist` extension module; this package just
re-exports its surface. All blocking calls release the GIL, so Python threads
genuinely race the underlying data structures.
"""

from ._gclist import (
    Set,
    check_history,
    compare_memory,
    implementations,
    record_history,
    run_benchmark,
)

__all__ = [
    "Set",
    "check_history",
    "compare_memory",
    "implementations",
    "record_history",
    "run_benchmark",
]
