"""Pendulum semiclassics of the near-resonant rotor.

On resonance the reduced dynamics of a rest-launched trajectory is a pendulum
with stable equilibrium at θ = π and frequency ``ω = sqrt(K/Δ)``:

    θ̈ = (K/Δ) sin θ,    θ(0) = θ₀,   θ̇(0) = 0.

Its closed-form solution uses the launch modulus ``k = sin((θ₀ - π)/2)``:

    θ(t) = π + 2 arcsin( k · cn(ωt, k) / dn(ωt, k) ).

Trajectory families launched at rest refocus near odd multiples of the
pendulum quarter period; the focusing times (caustics) and the fluctuation
ODEs around the trajectory are provided here. Time ``t`` is continuous;
dividing by the detuning converts to kick counts (``n = t/Δ``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import _kernels
from .elliptic import complete_k
from .errors import NoRootError, SeparatrixError, ValidationError

__all__ = [
    "CausticPrediction",
    "CausticFailure",
    "CausticCurve",
    "launch_modulus",
    "pendulum_angle",
    "discrete_action",
    "caustic_kicks",
    "mean_caustic_kicks",
    "solve_caustic_time",
    "caustic_curve",
    "variational_derivative",
    "fluctuation_determinant",
]

#: finite-difference step for modulus derivatives
_FD_STEP = 1e-6

#: relative bisection tolerance for caustic times
_ROOT_TOL = 1e-10


def _check_pendulum_params(kick_strength: float, detuning: float):
    if not (math.isfinite(kick_strength) and kick_strength >= 0):
        raise ValidationError(f"kick_strength must be finite and >= 0, got {kick_strength!r}")
    if not (math.isfinite(detuning) and detuning > 0):
        raise ValidationError(f"detuning must be finite and > 0, got {detuning!r}")


def launch_modulus(theta0: float) -> float:
    """Modulus ``k = sin((θ₀-π)/2)`` of a rest launch; θ₀ must avoid 0 and 2π.

    At θ₀ = 0 or 2π the launch sits on the separatrix (|k| = 1) where the
    libration period diverges; that raises ``SeparatrixError``.
    """
    theta0 = float(theta0)
    if not math.isfinite(theta0) or not 0.0 <= theta0 <= 2.0 * np.pi:
        raise ValidationError(f"theta0 must lie in [0, 2π], got {theta0!r}")
    k = math.sin(0.5 * (theta0 - np.pi))
    if abs(k) >= 1.0:
        raise SeparatrixError(
            f"theta0 = {theta0!r} launches on the separatrix (|k| = 1)"
        )
    return k


def pendulum_angle(theta0: float, t, kick_strength: float, detuning: float):
    """Closed-form pendulum angle at time ``t`` (scalar or array).

    Always returns values in ``(0, 2π)``; librations never cross the
    unstable equilibrium.
    """
    _check_pendulum_params(kick_strength, detuning)
    k = launch_modulus(theta0)
    omega = math.sqrt(kick_strength / detuning)
    t_arr = np.asarray(t, dtype=float)
    sn, cn, dn = _kernels.jacobi_batch(t_arr * omega, np.full_like(t_arr, abs(k)))
    ratio = np.clip(k * (cn / dn), -1.0, 1.0)
    angles = np.pi + 2.0 * np.arcsin(ratio)
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(angles)
    return angles


def discrete_action(path, kick_strength: float, detuning: float) -> float:
    """Action of a discrete angle path: ``Σ_j [(θ_{j+1}-θ_j)²/(2Δ) - K cos θ_{j+1}]``.

    Stationary paths of this sum satisfy the reduced kicked-map recursion;
    the path must be unwrapped (no mod-2π jumps) for the differences to be
    meaningful.
    """
    _check_pendulum_params(kick_strength, detuning)
    path = np.asarray(path, dtype=float)
    if path.ndim != 1 or path.size < 2:
        raise ValidationError("path must be a 1-d array with at least 2 angles")
    steps = np.diff(path)
    return float(
        np.sum(steps * steps / (2.0 * detuning))
        - kick_strength * np.sum(np.cos(path[1:]))
    )


def caustic_kicks(modulus: float, kick_strength: float, detuning: float, branch: int = 0) -> float:
    """Quarter-period estimate of the caustic kick count for one modulus.

    ``(2m+1) · K(|k|) / sqrt(K·Δ)`` for branch ``m``.
    """
    _check_pendulum_params(kick_strength, detuning)
    if kick_strength == 0:
        raise ValidationError("caustic times require kick_strength > 0")
    branch = _check_branch(branch)
    return (2 * branch + 1) * complete_k(abs(modulus)) / math.sqrt(
        kick_strength * detuning
    )


def mean_caustic_kicks(kick_strength: float, detuning: float, branch: int = 0) -> float:
    """Leading caustic kick count ``(2m+1)·π / (2 sqrt(K·Δ))`` (small-amplitude limit)."""
    _check_pendulum_params(kick_strength, detuning)
    if kick_strength == 0:
        raise ValidationError("caustic times require kick_strength > 0")
    branch = _check_branch(branch)
    return (2 * branch + 1) * np.pi / (2.0 * math.sqrt(kick_strength * detuning))


def _check_branch(branch) -> int:
    if not isinstance(branch, (int, np.integer)) or branch < 0:
        raise ValidationError(f"branch must be an integer >= 0, got {branch!r}")
    return int(branch)


def _caustic_function(u: float, kk: float) -> float:
    """Left side of the focusing condition: ``cn/dn + k ∂_k(cn/dn)`` at fixed u."""
    _, cn, dn = _kernels.jacobi_point(u, kk)
    hi = kk + _FD_STEP
    if hi > _kernels.MODULUS_CAP:
        hi = _kernels.MODULUS_CAP
    lo = hi - 2.0 * _FD_STEP
    _, cn_hi, dn_hi = _kernels.jacobi_point(u, hi)
    # the functions are even in the modulus, so a slightly negative lo is fine
    _, cn_lo, dn_lo = _kernels.jacobi_point(u, abs(lo))
    deriv = (cn_hi / dn_hi - cn_lo / dn_lo) / (2.0 * _FD_STEP)
    return cn / dn + kk * deriv


def solve_caustic_time(
    modulus: float, kick_strength: float, detuning: float, branch: int = 0
) -> float:
    """Focusing time for one launch modulus, by bisecting the focusing condition.

    The root is bracketed around the branch's odd quarter period; if no sign
    change exists there (which happens for launches too close to the
    separatrix, where the modulus derivative estimate degrades) a
    ``NoRootError`` is raised rather than returning a guess.
    """
    _check_pendulum_params(kick_strength, detuning)
    if kick_strength == 0:
        raise ValidationError("caustic times require kick_strength > 0")
    branch = _check_branch(branch)
    kk = abs(float(modulus))
    if kk >= 1.0:
        raise SeparatrixError(f"|modulus| must be < 1, got {modulus!r}")
    omega = math.sqrt(kick_strength / detuning)
    quarter = complete_k(kk)
    center = (2 * branch + 1) * quarter
    lo = center - 0.9 * quarter
    hi = center + 0.9 * quarter

    f_lo = _caustic_function(lo, kk)
    f_hi = _caustic_function(hi, kk)
    if f_lo == 0.0:
        return lo / omega
    if f_hi == 0.0:
        return hi / omega
    if f_lo * f_hi > 0.0:
        # scan the bracket for an interior sign change before giving up
        grid = np.linspace(lo, hi, 65)
        vals = [_caustic_function(u, kk) for u in grid]
        for left in range(len(grid) - 1):
            if vals[left] == 0.0:
                return float(grid[left]) / omega
            if vals[left] * vals[left + 1] < 0.0:
                lo, hi = float(grid[left]), float(grid[left + 1])
                f_lo = vals[left]
                break
        else:
            raise NoRootError(
                f"no focusing-condition sign change near branch {branch} "
                f"for modulus {modulus!r}"
            )

    while hi - lo > _ROOT_TOL * center:
        mid = 0.5 * (lo + hi)
        f_mid = _caustic_function(mid, kk)
        if f_mid == 0.0:
            return mid / omega
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo = mid
            f_lo = f_mid
    return 0.5 * (lo + hi) / omega


@dataclass(frozen=True)
class CausticPrediction:
    """One point of the semiclassical caustic curve."""

    branch: int
    modulus: float
    time: float
    kick_index: int
    theta: float


@dataclass(frozen=True)
class CausticFailure:
    """A modulus for which the focusing-time solve failed, with the reason."""

    modulus: float
    reason: str


@dataclass(frozen=True)
class CausticCurve:
    """Solved caustic points plus any per-modulus failures."""

    points: tuple
    failures: tuple


def caustic_curve(
    kick_strength: float, detuning: float, branch: int = 0, k_grid=None
) -> CausticCurve:
    """Caustic positions ``(θ, t)`` over a grid of launch moduli.

    Per-modulus solver failures are collected, not raised; the cusp point
    ``k = 0`` is added analytically as ``(π, mean caustic time)`` since the
    focusing condition becomes degenerate there.
    """
    _check_pendulum_params(kick_strength, detuning)
    if kick_strength == 0:
        raise ValidationError("caustic curves require kick_strength > 0")
    branch = _check_branch(branch)
    if k_grid is None:
        k_grid = np.linspace(-0.9, 0.9, 73)
    k_grid = np.atleast_1d(np.asarray(k_grid, dtype=float))

    points = []
    failures = []
    for k in k_grid:
        if k == 0.0:
            kicks = mean_caustic_kicks(kick_strength, detuning, branch)
            points.append(
                CausticPrediction(
                    branch=branch,
                    modulus=0.0,
                    time=kicks * detuning,
                    kick_index=int(round(kicks)),
                    theta=float(np.pi),
                )
            )
            continue
        try:
            t = solve_caustic_time(k, kick_strength, detuning, branch)
            theta0 = np.pi + 2.0 * math.asin(float(k))
            theta = pendulum_angle(theta0, t, kick_strength, detuning)
        except (NoRootError, SeparatrixError, ValidationError) as exc:
            failures.append(CausticFailure(modulus=float(k), reason=str(exc)))
            continue
        points.append(
            CausticPrediction(
                branch=branch,
                modulus=float(k),
                time=float(t),
                kick_index=int(round(t / detuning)),
                theta=float(theta),
            )
        )
    return CausticCurve(points=tuple(points), failures=tuple(failures))


def _tangent_solution(theta0, t, kick_strength, detuning, y0):
    """Integrate ``ÿ = ω² cos(θ_cl(t)) y`` along the closed-form trajectory."""
    _check_pendulum_params(kick_strength, detuning)
    k = launch_modulus(theta0)
    omega_sq = kick_strength / detuning
    omega = math.sqrt(omega_sq)
    kk = abs(k)

    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if t_arr.size == 0:
        raise ValidationError("t must contain at least one time")
    if np.any(t_arr < 0) or not np.all(np.isfinite(t_arr)):
        raise ValidationError("times must be finite and >= 0")
    t_max = float(t_arr.max())

    def rhs(time, y):
        sn, cn, dn = _kernels.jacobi_point(time * omega, kk)
        s = k * cn / dn
        # cos θ_cl from θ = π + 2 arcsin(s): cos θ = -(1 - 2 s²)
        return (y[1], omega_sq * (2.0 * s * s - 1.0) * y[0])

    if t_max == 0.0:
        values = np.full(t_arr.shape, y0[0])
    else:
        sol = solve_ivp(
            rhs,
            (0.0, t_max),
            y0,
            method="RK45",
            rtol=1e-10,
            atol=1e-12,
            dense_output=True,
        )
        if not sol.success:
            raise RuntimeError(f"tangent ODE integration failed: {sol.message}")
        values = sol.sol(t_arr)[0]

    if np.isscalar(t) or np.ndim(t) == 0:
        return float(values[0])
    return values


def variational_derivative(theta0: float, t, kick_strength: float, detuning: float):
    """Sensitivity ``v(t) = ∂θ(t)/∂θ₀`` of the pendulum flow to the launch angle.

    Solves ``v̈ = ω² cos(θ_cl) v`` with ``v(0) = 1``, ``v̇(0) = 0``; its zeros
    are the focusing times of the rest-launched family. ``t`` may be a scalar
    or an array.
    """
    return _tangent_solution(theta0, t, kick_strength, detuning, (1.0, 0.0))


def fluctuation_determinant(theta0: float, t, kick_strength: float, detuning: float):
    """Determinant ``u(t)`` of the fluctuation operator around the trajectory.

    Solves the same Jacobi equation with ``u(0) = 0``, ``u̇(0) = 1``. In the
    harmonic limit (θ₀ -> π) it reduces to ``sin(ωt)/ω``; its zeros interlace
    those of :func:`variational_derivative`.
    """
    return _tangent_solution(theta0, t, kick_strength, detuning, (0.0, 1.0))
