"""Shared value types and basis transforms for the kicked-rotor simulation.

Conventions
-----------
* The rotor angle lives on ``[0, 2π)`` sampled at ``M`` uniform nodes
  ``θ_j = j · (2π/M)`` with ``M`` even, so node ``M/2`` sits exactly at π.
* Momentum is integer valued. A wave state stores the coefficients ``c_p`` of
  the plane waves ``e^{ipθ}/sqrt(2π)`` for ``p ∈ {-M/2, ..., M/2-1}``, kept in
  FFT wrap-around order ``[0, 1, ..., M/2-1, -M/2, ..., -1]`` and normalized
  so that ``Σ_p |c_p|² = 1``.
* Angle-space values carry the continuum density: ``ψ(θ_j)`` with
  ``Σ_j |ψ(θ_j)|² · (2π/M) = 1``, so a uniform state has
  ``|ψ| = 1/sqrt(2π) ≈ 0.3989`` everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "SimParams",
    "AngleGrid",
    "WaveState",
    "AmplitudeField",
    "make_params",
    "angle_grid",
    "momentum_values",
    "uniform_state",
    "to_angle",
    "to_momentum",
]

#: tolerance on |Σ|c_p|² - 1| for a freshly constructed wave state
NORM_TOL = 1e-12

#: tolerance on the continuum normalization of a stored amplitude row
FIELD_NORM_TOL = 1e-9


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SimParams:
    """Immutable parameter set for one simulation run.

    Parameters
    ----------
    kick_strength : float
        Strength of the periodic kick potential; must be >= 0 (0 gives free
        evolution).
    detuning : float
        Offset of the kicking period from the revival period 4π; must be >= 0.
    basis_size : int
        Number of momentum states retained; even, >= 2.
    n_kicks : int
        Number of kicks to apply; >= 0.
    interaction : float
        Mean-field interaction strength, any sign; linear evolution requires 0.

    The kicking period is derived, never passed: ``period = 4π + detuning``.
    """

    kick_strength: float
    detuning: float
    basis_size: int
    n_kicks: int
    interaction: float = 0.0
    period: float = field(init=False)

    def __post_init__(self):
        problems = []
        if not np.isfinite(self.kick_strength) or self.kick_strength < 0:
            problems.append(
                f"kick_strength must be finite and >= 0, got {self.kick_strength!r}"
            )
        if not np.isfinite(self.detuning) or self.detuning < 0:
            problems.append(
                f"detuning must be finite and >= 0, got {self.detuning!r}"
            )
        if not isinstance(self.basis_size, (int, np.integer)) or (
            self.basis_size < 2 or self.basis_size % 2
        ):
            problems.append(
                f"basis_size must be an even integer >= 2, got {self.basis_size!r}"
            )
        if not isinstance(self.n_kicks, (int, np.integer)) or self.n_kicks < 0:
            problems.append(f"n_kicks must be an integer >= 0, got {self.n_kicks!r}")
        if not np.isfinite(self.interaction):
            problems.append(f"interaction must be finite, got {self.interaction!r}")
        if problems:
            raise ValidationError("; ".join(problems))
        object.__setattr__(self, "period", 4.0 * np.pi + self.detuning)


def make_params(
    kick_strength: float,
    detuning: float,
    basis_size: int = 2048,
    n_kicks: int = 300,
    interaction: float = 0.0,
) -> SimParams:
    """Validate and build a :class:`SimParams`."""
    return SimParams(
        kick_strength=float(kick_strength),
        detuning=float(detuning),
        basis_size=int(basis_size),
        n_kicks=int(n_kicks),
        interaction=float(interaction),
    )


@dataclass(frozen=True, eq=False)
class AngleGrid:
    """Uniform angle grid ``θ_j = j · (2π/M)`` on ``[0, 2π)``."""

    nodes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen_array(self.nodes, float))

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.size

    @property
    def axis_index(self) -> int:
        """Index of the node at π (the symmetry axis)."""
        return self.size // 2


def angle_grid(basis_size: int) -> AngleGrid:
    """Build the angle grid matching a momentum basis of ``basis_size`` states."""
    m = int(basis_size)
    if m < 2 or m % 2:
        raise ValidationError(f"basis_size must be an even integer >= 2, got {basis_size!r}")
    return AngleGrid(nodes=np.arange(m) * (2.0 * np.pi / m))


def momentum_values(basis_size: int) -> np.ndarray:
    """Integer momenta in FFT wrap-around order ``[0..M/2-1, -M/2..-1]``."""
    p = np.arange(int(basis_size))
    return np.where(p < basis_size // 2, p, p - basis_size)


@dataclass(frozen=True, eq=False)
class WaveState:
    """Momentum-space wave function; ``Σ_p |c_p|² = 1`` within ``NORM_TOL``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.array(self.amplitudes, dtype=complex)
        if arr.ndim != 1 or arr.shape[0] < 2 or arr.shape[0] % 2:
            raise ValidationError(
                f"amplitudes must be a 1-d array of even length >= 2, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr.view(float))):
            raise ValidationError("amplitudes contain non-finite values")
        norm_sq = float(np.vdot(arr, arr).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValidationError(
                f"squared norm {norm_sq!r} deviates from 1 by more than {NORM_TOL:g}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "amplitudes", arr)

    @property
    def basis_size(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def uniform_state(basis_size: int) -> WaveState:
    """Zero-momentum state: uniform angle profile ``|ψ| = 1/sqrt(2π)``."""
    m = int(basis_size)
    if m < 2 or m % 2:
        raise ValidationError(f"basis_size must be an even integer >= 2, got {basis_size!r}")
    amplitudes = np.zeros(m, dtype=complex)
    amplitudes[0] = 1.0
    return WaveState(amplitudes=amplitudes)


def to_angle(state: WaveState) -> np.ndarray:
    """Angle-space values ``ψ(θ_j)`` of a momentum-space state.

    The inverse FFT of the wrap-around coefficients evaluates
    ``Σ_p c_p e^{ipθ_j} / M``; rescaling by ``M/sqrt(2π)`` yields values with
    continuum normalization ``Σ_j |ψ(θ_j)|² (2π/M) = 1``.
    """
    m = state.basis_size
    return np.fft.ifft(state.amplitudes) * (m / np.sqrt(2.0 * np.pi))


def to_momentum(values: np.ndarray) -> WaveState:
    """Inverse of :func:`to_angle`; input must be continuum-normalized."""
    values = np.asarray(values, dtype=complex)
    m = values.shape[0]
    amplitudes = np.fft.fft(values) * (np.sqrt(2.0 * np.pi) / m)
    return WaveState(amplitudes=amplitudes)


@dataclass(frozen=True, eq=False)
class AmplitudeField:
    """Magnitudes ``|ψ(θ_j)|`` recorded after each kick.

    ``values[n, j]`` is the magnitude at node ``j`` after ``n`` kicks; row 0 is
    the initial state. Every row keeps the continuum normalization
    ``Σ_j v² (2π/M) = 1`` within ``FIELD_NORM_TOL``.
    """

    grid: AngleGrid
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.grid.size:
            raise ValidationError(
                f"values must have shape (n_kicks + 1, {self.grid.size}), got {arr.shape}"
            )
        if arr.size and arr.min() < 0:
            raise ValidationError("amplitude values must be nonnegative")
        row_norms = arr.astype(float) ** 2 @ np.full(arr.shape[1], self.grid.spacing)
        if arr.size and np.max(np.abs(row_norms - 1.0)) > FIELD_NORM_TOL:
            worst = float(np.max(np.abs(row_norms - 1.0)))
            raise ValidationError(
                f"row continuum norm deviates from 1 by {worst:.3e} (> {FIELD_NORM_TOL:g})"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_kicks(self) -> int:
        return self.values.shape[0] - 1

    def axis_cut(self) -> np.ndarray:
        """Column of magnitudes at the node nearest π, one entry per kick."""
        return self.values[:, self.grid.axis_index].copy()
