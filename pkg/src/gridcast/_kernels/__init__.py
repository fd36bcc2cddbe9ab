"""Graph kernel backend selection.

Prefers the compiled Cython extension and falls back to the pure-Python
implementation when the extension was not built. Set GRIDCAST_PURE=1 to
force the pure backend (used by the benchmark and parity tests).
"""

import os

from . import pure

if os.environ.get("GRIDCAST_PURE"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

dijkstra = _impl.dijkstra
dijkstra_multi = _impl.dijkstra_multi
bfs_hops = _impl.bfs_hops

__all__ = ["dijkstra", "dijkstra_multi", "bfs_hops", "BACKEND", "pure"]
