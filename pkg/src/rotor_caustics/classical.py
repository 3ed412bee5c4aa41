"""Classical kicked-rotor maps and fold detection.

Two area-preserving maps share one iteration kernel:

* the standard kicked map at physical period ``T``:
  ``θ' = (θ + p·T) mod 2π``, ``p' = p + K sin θ'``;
* the near-resonance reduced map in scaled momentum at unit period:
  ``θ' = (θ + p) mod 2π``, ``p' = p + K·Δ sin θ'``,
  i.e. the standard map with effective strength ``K·Δ``.

The angle wraps after the drift and before the kick. Stability boundaries of
the reduced map are controlled by the product ``K·Δ`` alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import SimParams
from .errors import ValidationError

__all__ = [
    "PhasePoint",
    "ClassicalEnsemble",
    "FoldPoint",
    "ChaosThresholds",
    "CHAOS_THRESHOLDS",
    "standard_map_step",
    "resonant_map_step",
    "grid_ensemble",
    "propagate",
    "fold_detect",
    "poincare_section",
]

TWO_PI = _kernels.TWO_PI


@dataclass(frozen=True)
class ChaosThresholds:
    """Stability landmarks of the kicked map.

    ``chirikov_critical`` is the effective strength where the last invariant
    circle of the standard map breaks; ``global_chaos`` is where the reduced
    map's phase space is essentially fully chaotic.
    """

    chirikov_critical: float = 0.9716
    global_chaos: float = 5.0


CHAOS_THRESHOLDS = ChaosThresholds()


@dataclass(frozen=True)
class PhasePoint:
    """A single classical phase-space point ``(θ, p)``."""

    theta: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.p)):
            raise ValidationError(
                f"phase point must be finite, got ({self.theta!r}, {self.p!r})"
            )


@dataclass(frozen=True, eq=False)
class ClassicalEnsemble:
    """Arrays of phase-space points propagated together."""

    thetas: np.ndarray
    ps: np.ndarray

    def __post_init__(self):
        thetas = np.atleast_1d(np.array(self.thetas, dtype=float))
        ps = np.atleast_1d(np.array(self.ps, dtype=float))
        if thetas.shape != ps.shape or thetas.ndim != 1:
            raise ValidationError(
                f"ensemble arrays must be 1-d and equal length, got {thetas.shape} vs {ps.shape}"
            )
        if thetas.size and not (
            np.all(np.isfinite(thetas)) and np.all(np.isfinite(ps))
        ):
            raise ValidationError("ensemble contains non-finite points")
        thetas.flags.writeable = False
        ps.flags.writeable = False
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "ps", ps)

    @property
    def size(self) -> int:
        return self.thetas.shape[0]


def grid_ensemble(theta0, p0=0.0) -> ClassicalEnsemble:
    """Ensemble from an angle grid with a common (or per-point) momentum."""
    theta0 = np.atleast_1d(np.asarray(theta0, dtype=float))
    p0 = np.broadcast_to(np.asarray(p0, dtype=float), theta0.shape).copy()
    return ClassicalEnsemble(thetas=theta0, ps=p0)


def _wrap(angle: float) -> float:
    reduced = math.fmod(angle, TWO_PI)
    if reduced < 0.0:
        reduced += TWO_PI
    return reduced


def standard_map_step(point: PhasePoint, kick_strength: float, period: float) -> PhasePoint:
    """One step of the standard kicked map at the given period."""
    if not (math.isfinite(kick_strength) and math.isfinite(period)):
        raise ValidationError("kick_strength and period must be finite")
    theta = _wrap(point.theta + point.p * period)
    p = point.p + kick_strength * math.sin(theta)
    return PhasePoint(theta=theta, p=p)


def resonant_map_step(point: PhasePoint, kick_strength: float, detuning: float) -> PhasePoint:
    """One step of the near-resonance reduced map in scaled momentum.

    Identical to ``standard_map_step`` with effective strength
    ``kick_strength · detuning`` and unit period.
    """
    if not (math.isfinite(kick_strength) and math.isfinite(detuning)):
        raise ValidationError("kick_strength and detuning must be finite")
    theta = _wrap(point.theta + point.p)
    p = point.p + (kick_strength * detuning) * math.sin(theta)
    return PhasePoint(theta=theta, p=p)


def _map_coefficients(map_kind: str, params: SimParams):
    """Effective (strength, period) for the shared iteration kernel."""
    if map_kind == "standard":
        return params.kick_strength, params.period
    if map_kind == "resonant":
        return params.kick_strength * params.detuning, 1.0
    raise ValidationError(f"map_kind must be 'standard' or 'resonant', got {map_kind!r}")


def propagate(
    ensemble: ClassicalEnsemble,
    map_kind: str,
    params: SimParams,
    n_steps: int,
) -> list[ClassicalEnsemble]:
    """Iterate an ensemble; returns ``n_steps + 1`` snapshots, seeds first."""
    n_steps = int(n_steps)
    if n_steps < 0:
        raise ValidationError(f"n_steps must be >= 0, got {n_steps}")
    kick, period = _map_coefficients(map_kind, params)
    thetas, ps = _kernels.map_trajectories(
        ensemble.thetas, ensemble.ps, kick, period, n_steps, True
    )
    return [
        ClassicalEnsemble(thetas=thetas[step], ps=ps[step])
        for step in range(n_steps + 1)
    ]


@dataclass(frozen=True)
class FoldPoint:
    """A sign change of ``∂θ_n/∂θ₀`` detected on a launch grid.

    ``step`` is the kick count, ``theta`` the mapped angle at the fold (always
    reported in ``[0, 2π)``), ``theta0`` the launch angle it originated from.
    """

    step: int
    theta: float
    theta0: float


def fold_detect(
    theta0_grid,
    map_kind: str,
    params: SimParams,
    n_steps: int,
) -> list[FoldPoint]:
    """Locate folds of the launch-angle-to-angle map for rest launches.

    A grid of trajectories starts at rest (``p = 0``). After each step the
    derivative ``∂θ_n/∂θ₀`` is estimated by central differences on the
    *unwrapped* angle (the recursion skips the mod so wrap jumps cannot fake
    sign changes; the dynamics is unchanged since sin is 2π-periodic). A sign
    change between adjacent interior nodes emits a fold at the midpoint of the
    two mapped angles.
    """
    theta0 = np.atleast_1d(np.asarray(theta0_grid, dtype=float))
    if theta0.ndim != 1 or theta0.size < 3:
        raise ValidationError("fold detection needs a 1-d grid of at least 3 angles")
    if np.any(np.diff(theta0) <= 0):
        raise ValidationError("theta0 grid must be strictly increasing")
    n_steps = int(n_steps)
    if n_steps < 0:
        raise ValidationError(f"n_steps must be >= 0, got {n_steps}")
    kick, period = _map_coefficients(map_kind, params)
    thetas, _ = _kernels.map_trajectories(
        theta0, np.zeros_like(theta0), kick, period, n_steps, False
    )

    # derivative at interior node i, for every step at once
    deriv = (thetas[:, 2:] - thetas[:, :-2]) / (theta0[2:] - theta0[:-2])
    signs = np.sign(deriv)

    folds: list[FoldPoint] = []
    zero_steps, zero_nodes = np.nonzero(signs[1:] == 0.0)
    for step, node in zip(zero_steps + 1, zero_nodes + 1):
        folds.append(
            FoldPoint(
                step=int(step),
                theta=_wrap(float(thetas[step, node])),
                theta0=float(theta0[node]),
            )
        )
    flip_steps, flip_nodes = np.nonzero(signs[1:, :-1] * signs[1:, 1:] < 0.0)
    for step, left in zip(flip_steps + 1, flip_nodes + 1):
        mid_theta = 0.5 * (float(thetas[step, left]) + float(thetas[step, left + 1]))
        mid_theta0 = 0.5 * (float(theta0[left]) + float(theta0[left + 1]))
        folds.append(
            FoldPoint(step=int(step), theta=_wrap(mid_theta), theta0=mid_theta0)
        )
    folds.sort(key=lambda f: (f.step, f.theta0))
    return folds


def poincare_section(
    seeds: ClassicalEnsemble,
    map_kind: str,
    params: SimParams,
    n_steps: int,
):
    """All phase-space points visited by the seeds, as ``(thetas, ps)`` arrays.

    Both arrays have shape ``(n_steps + 1, n_seeds)`` with the seeds in row 0;
    angles are wrapped to ``[0, 2π)``, momenta are left unfolded.
    """
    n_steps = int(n_steps)
    if n_steps < 0:
        raise ValidationError(f"n_steps must be >= 0, got {n_steps}")
    kick, period = _map_coefficients(map_kind, params)
    thetas, ps = _kernels.map_trajectories(
        seeds.thetas, seeds.ps, kick, period, n_steps, True
    )
    return thetas, ps
