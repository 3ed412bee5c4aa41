"""Kernel lane selection.

The compiled Cython core is preferred when its build succeeded; otherwise the
numpy fallback provides the same functions. ``backend_name()`` reports which
lane is active, and ``get_backend()`` exposes a specific lane for the
benchmark and the cross-lane tests.
"""

from __future__ import annotations

try:
    from . import _core as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built; numpy lane
    from . import _fallback as _impl

    BACKEND = "fallback"

from ._fallback import MODULUS_CAP, TWO_PI

map_trajectories = _impl.map_trajectories
complete_k_batch = _impl.complete_k_batch
complete_k_point = _impl.complete_k_point
jacobi_batch = _impl.jacobi_batch
jacobi_point = _impl.jacobi_point

__all__ = [
    "BACKEND",
    "MODULUS_CAP",
    "TWO_PI",
    "backend_name",
    "get_backend",
    "map_trajectories",
    "complete_k_batch",
    "complete_k_point",
    "jacobi_batch",
    "jacobi_point",
]


def backend_name() -> str:
    """Name of the active kernel lane: ``"compiled"`` or ``"fallback"``."""
    return BACKEND


def get_backend(name: str):
    """Return a specific kernel lane module.

    Raises ``ImportError`` if the compiled lane is requested but was not
    built.
    """
    if name == "fallback":
        from . import _fallback

        return _fallback
    if name == "compiled":
        from . import _core

        return _core
    raise ValueError(f"unknown kernel lane {name!r}")
