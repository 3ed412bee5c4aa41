"""Elliptic integrals and Jacobi functions.

Self-contained kernel built on the arithmetic-geometric mean: ``complete_k``
iterates the AGM to its fixed point, and ``jacobi`` runs a fixed-depth
descending Landen recursion. No external special-function library is used;
the test suite cross-checks against adaptive quadrature and high-precision
reference values.

Both functions are even in the modulus ``k``. The Jacobi recursion caps
``|k|`` at ``1 - 1e-12``, keeping the recursion away from the separatrix
where the period diverges; ``|k| = 1`` exactly is served by the hyperbolic
closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ValidationError

__all__ = [
    "JacobiTriple",
    "complete_k",
    "complete_k_values",
    "jacobi",
    "jacobi_values",
]


@dataclass(frozen=True)
class JacobiTriple:
    """Values ``(sn, cn, dn)`` of the Jacobi elliptic functions at one point."""

    sn: float
    cn: float
    dn: float


def complete_k(k: float) -> float:
    """Complete elliptic integral of the first kind ``K(k)``.

    ``K(k) = ∫₀^{π/2} dt / sqrt(1 - k² sin²t)``, evaluated as
    ``π / (2 · AGM(1, sqrt(1-k²)))``. The integral diverges as ``|k| -> 1``;
    ``|k| >= 1`` is rejected.
    """
    k = float(k)
    if not math.isfinite(k) or abs(k) >= 1.0:
        raise ValidationError(f"complete_k requires |k| < 1, got {k!r}")
    return float(_kernels.complete_k_point(k))


def complete_k_values(k) -> np.ndarray:
    """Vectorized :func:`complete_k`."""
    k = np.asarray(k, dtype=float)
    if k.size and (not np.all(np.isfinite(k)) or np.max(np.abs(k)) >= 1.0):
        raise ValidationError("complete_k requires |k| < 1 for every element")
    return np.asarray(_kernels.complete_k_batch(np.ascontiguousarray(k.ravel()))).reshape(k.shape)


def jacobi(u: float, k: float) -> JacobiTriple:
    """Jacobi elliptic functions ``sn(u,k)``, ``cn(u,k)``, ``dn(u,k)``.

    Requires ``|k| <= 1``; ``|k| = 1`` returns the hyperbolic degeneration
    ``(tanh u, sech u, sech u)`` and ``k = 0`` the trigonometric one
    ``(sin u, cos u, 1)``.
    """
    u = float(u)
    k = float(k)
    if not math.isfinite(u):
        raise ValidationError(f"jacobi requires finite u, got {u!r}")
    if not math.isfinite(k) or abs(k) > 1.0:
        raise ValidationError(f"jacobi requires |k| <= 1, got {k!r}")
    sn, cn, dn = _kernels.jacobi_point(u, k)
    return JacobiTriple(sn=float(sn), cn=float(cn), dn=float(dn))


def jacobi_values(u, k):
    """Vectorized :func:`jacobi`; broadcasts ``u`` against ``k``.

    Returns the three arrays ``(sn, cn, dn)``.
    """
    u = np.asarray(u, dtype=float)
    k = np.asarray(k, dtype=float)
    if u.size and not np.all(np.isfinite(u)):
        raise ValidationError("jacobi requires finite u for every element")
    if k.size and (not np.all(np.isfinite(k)) or np.max(np.abs(k)) > 1.0):
        raise ValidationError("jacobi requires |k| <= 1 for every element")
    return _kernels.jacobi_batch(u, k)
