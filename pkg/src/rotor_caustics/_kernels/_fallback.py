"""Pure numpy implementations of the hot kernels.

Algorithmically identical to the compiled lane in ``_core.pyx``; kept in sync
by the cross-lane checks in the benchmark and test suite. Within one lane
results are fully deterministic.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi

#: Jacobi functions are evaluated with the modulus magnitude capped here;
#: the cap keeps the Landen recursion away from the separatrix where the
#: period diverges.
MODULUS_CAP = 1.0 - 1e-12

#: fixed descending-Landen depth; past convergence the extra steps are exact
#: angle halvings, so a constant depth costs nothing in accuracy
_LANDEN_STEPS = 16

_AGM_TOL = 4e-16
_AGM_MAX_ITER = 60


def map_trajectories(theta0, p0, kick, period, n_steps, wrap):
    """Iterate the kicked map ``θ' = θ + p·period``, ``p' = p + kick·sin θ'``.

    Returns arrays of shape ``(n_steps + 1, len(theta0))`` holding every
    visited point, row 0 being the seeds. With ``wrap`` the angle is reduced
    into ``[0, 2π)`` after the drift and before the kick; without it the angle
    accumulates (the momentum sequence is identical either way since sin is
    2π-periodic).
    """
    theta = np.array(theta0, dtype=float)
    p = np.array(p0, dtype=float)
    n_steps = int(n_steps)
    thetas = np.empty((n_steps + 1, theta.shape[0]), dtype=float)
    ps = np.empty_like(thetas)
    thetas[0] = theta
    ps[0] = p
    for step in range(1, n_steps + 1):
        theta = theta + p * period
        if wrap:
            theta = np.mod(theta, TWO_PI)
        p = p + kick * np.sin(theta)
        thetas[step] = theta
        ps[step] = p
    return thetas, ps


def complete_k_batch(k):
    """Complete elliptic integral of the first kind via the AGM.

    ``K(k) = π / (2 · AGM(1, sqrt(1-k²)))``; requires ``|k| < 1``.
    """
    k = np.asarray(k, dtype=float)
    a = np.ones_like(k)
    b = np.sqrt((1.0 - np.abs(k)) * (1.0 + np.abs(k)))
    for _ in range(_AGM_MAX_ITER):
        if np.all(np.abs(a - b) <= _AGM_TOL * a):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return np.pi / (a + b)


def complete_k_point(k):
    return float(complete_k_batch(np.array([k]))[0])


def jacobi_batch(u, k):
    """Jacobi sn, cn, dn by descending Landen transformation.

    The functions are even in ``k``; the magnitude is capped at
    ``MODULUS_CAP`` and ``|k| = 1`` exactly returns the hyperbolic
    degeneration ``(tanh u, sech u, sech u)``.
    """
    u = np.asarray(u, dtype=float)
    k = np.asarray(k, dtype=float)
    u, k = np.broadcast_arrays(u, k)
    u = u.astype(float)
    kk = np.abs(k).astype(float)
    hyper = kk == 1.0
    kk = np.minimum(kk, MODULUS_CAP)

    complement = (1.0 - kk) * (1.0 + kk)
    a = np.ones_like(kk)
    b = np.sqrt(complement)
    ratios = np.empty((_LANDEN_STEPS, ) + kk.shape, dtype=float)
    for step in range(_LANDEN_STEPS):
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        ratios[step] = c / a

    phi = np.ldexp(a * u, _LANDEN_STEPS)
    for step in range(_LANDEN_STEPS - 1, -1, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(ratios[step] * np.sin(phi), -1.0, 1.0)))

    sn = np.sin(phi)
    cn = np.cos(phi)
    # dn through the complementary channel: cn² + (1-k²)·sn² has no
    # cancellation anywhere (both terms nonnegative), unlike the textbook
    # cn / cos(φ₁-φ₀) form whose numerator and denominator vanish together
    # at the quarter periods
    dn = np.sqrt(cn * cn + complement * sn * sn)

    if np.any(hyper):
        sech = 1.0 / np.cosh(u[hyper])
        sn[hyper] = np.tanh(u[hyper])
        cn[hyper] = sech
        dn[hyper] = sech
    return sn, cn, dn


def jacobi_point(u, k):
    sn, cn, dn = jacobi_batch(np.array([u]), np.array([k]))
    return float(sn[0]), float(cn[0]), float(dn[0])
