"""Hot kernels: compiled extension when available, pure-Python twin otherwise."""

from . import pyref

try:  # pragma: no cover - depends on the build environment
    from ._dijkstra import dijkstra_update

    KERNEL = "compiled"
except ImportError:  # pragma: no cover
    dijkstra_update = pyref.dijkstra_update
    KERNEL = "python"

__all__ = ["dijkstra_update", "KERNEL", "pyref"]
