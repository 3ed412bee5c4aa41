"""Cusp amplitude scaling: prediction, measurement, and the diffraction integral.

The focusing of rest-launched trajectories imprints a cusp on the wave
function whose peak height is governed by a single quartic phase coefficient

    λ = -(π/48) · sqrt(K/Δ),

giving the scaling law ``|ψ_peak| ≈ prefactor · |λ|^{1/4}``: a log-log slope
of 1/8 in ``K/Δ``. ``measure_cusp_amplitude`` extracts the peak from a full
quantum run, ``fit_arnold_index`` recovers the exponent from a set of runs,
and ``cusp_integral`` evaluates the underlying stationary-phase integral by
direct oscillatory quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import SimParams, uniform_state
from .errors import QuadratureError, ValidationError
from .quantum import evolve, peak_amplitude
from .semiclassics import mean_caustic_kicks

__all__ = [
    "ScalingRecord",
    "FitResult",
    "quartic_coefficient",
    "predicted_cusp_amplitude",
    "measure_cusp_amplitude",
    "fit_arnold_index",
    "cusp_integral",
]

#: peaks are searched in [0.5, 1.5] times the predicted caustic kick count
_WINDOW = (0.5, 1.5)

#: a caustic needs at least this many kicks to be resolvable
_MIN_CAUSTIC_KICKS = 5.0


def _check_ratio_params(kick_strength: float, detuning: float):
    if not (math.isfinite(kick_strength) and kick_strength > 0):
        raise ValidationError(f"kick_strength must be finite and > 0, got {kick_strength!r}")
    if not (math.isfinite(detuning) and detuning > 0):
        raise ValidationError(f"detuning must be finite and > 0, got {detuning!r}")


def quartic_coefficient(kick_strength: float, detuning: float) -> float:
    """Quartic phase coefficient ``λ = -(π/48)·sqrt(K/Δ)`` at the first cusp."""
    _check_ratio_params(kick_strength, detuning)
    return -(np.pi / 48.0) * math.sqrt(kick_strength / detuning)


def predicted_cusp_amplitude(
    kick_strength: float, detuning: float, prefactor: float = 2.0
) -> float:
    """Predicted peak magnitude ``prefactor · |λ|^{1/4}``.

    The default prefactor 2 is an empirical constant; pass a refitted value
    to recalibrate without touching the exponent.
    """
    return prefactor * abs(quartic_coefficient(kick_strength, detuning)) ** 0.25


@dataclass(frozen=True)
class ScalingRecord:
    """One point of the amplitude-vs-(K/Δ) scaling study."""

    kick_strength: float
    detuning: float
    quartic_coeff: float
    measured: float
    predicted: float


def measure_cusp_amplitude(params: SimParams) -> ScalingRecord:
    """Peak magnitude near the first caustic of a full quantum run.

    Evolves a uniform state for 1.5 times the predicted caustic kick count
    and takes the field maximum in the window [0.5, 1.5] times the
    prediction. Requires a linear run whose caustic takes at least
    ``_MIN_CAUSTIC_KICKS`` kicks to form, otherwise it cannot be resolved.
    """
    if params.interaction != 0.0:
        raise ValidationError("cusp measurement requires interaction == 0")
    _check_ratio_params(params.kick_strength, params.detuning)
    kicks = mean_caustic_kicks(params.kick_strength, params.detuning)
    if kicks < _MIN_CAUSTIC_KICKS:
        raise ValidationError(
            f"caustic forms in {kicks:.2f} kicks; need >= {_MIN_CAUSTIC_KICKS:g} "
            "(detuning too large relative to the kick strength)"
        )
    n_total = math.ceil(_WINDOW[1] * kicks)
    run_params = replace(params, n_kicks=n_total)
    record = evolve(uniform_state(params.basis_size), run_params)
    window = (math.floor(_WINDOW[0] * kicks), n_total)
    peak = peak_amplitude(record, window)
    return ScalingRecord(
        kick_strength=params.kick_strength,
        detuning=params.detuning,
        quartic_coeff=quartic_coefficient(params.kick_strength, params.detuning),
        measured=peak.amplitude,
        predicted=predicted_cusp_amplitude(params.kick_strength, params.detuning),
    )


@dataclass(frozen=True)
class FitResult:
    """Least-squares line through ``log(measured)`` vs ``log(K/Δ)``."""

    slope: float
    intercept: float
    residual: float


def fit_arnold_index(records) -> FitResult:
    """Fit the scaling exponent from measured cusp amplitudes.

    Needs at least 3 records spanning at least one decade in ``K/Δ``. The
    residual is the root-mean-square misfit of the log-log line.
    """
    records = list(records)
    if len(records) < 3:
        raise ValidationError(f"need at least 3 records, got {len(records)}")
    ratios = np.array([r.kick_strength / r.detuning for r in records])
    measured = np.array([r.measured for r in records])
    if np.any(measured <= 0) or np.any(ratios <= 0):
        raise ValidationError("records must have positive K/Δ and measured amplitude")
    if ratios.max() / ratios.min() < 10.0:
        raise ValidationError(
            f"records span only a factor {ratios.max() / ratios.min():.2f} in K/Δ; "
            "need at least a decade"
        )
    x = np.log(ratios)
    y = np.log(measured)
    slope, intercept = np.polyfit(x, y, 1)
    fit_residuals = y - (slope * x + intercept)
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        residual=float(np.sqrt(np.mean(fit_residuals**2))),
    )


def cusp_integral(
    delta_angle: float,
    t: float,
    kick_strength: float,
    detuning: float,
    quad_points: int = 20001,
) -> complex:
    """Stationary-phase focusing integral at observation offset ``δ = θ - π``.

    Direct trapezoidal quadrature over the launch offset ``δ₀ ∈ [-π, π]`` of

        exp{ i [ (ω/(2 sin ωt))((δ² + δ₀²) cos ωt - 2 δ δ₀) - (ω² t/24) δ₀⁴ ] }

    scaled by the harmonic propagator amplitude ``sqrt(ω/(2π|sin ωt|))`` and
    the uniform initial density ``1/sqrt(2π)``; no further normalization is
    applied, so only shapes and ratios are meaningful. The quadratic phase
    vanishes at the quarter period, where the quartic term (coefficient
    ``-ω²t/24``, the λ of the scaling law at that instant) controls the peak.

    The value is accepted only if doubling the node count changes it by less
    than 1e-4 relative; otherwise ``QuadratureError`` is raised. As ``t``
    approaches a half period ``sin ωt`` vanishes and the representation
    degenerates; such times are rejected.
    """
    _check_ratio_params(kick_strength, detuning)
    if not (math.isfinite(t) and t > 0):
        raise ValidationError(f"t must be finite and > 0, got {t!r}")
    if not (math.isfinite(delta_angle) and abs(delta_angle) <= np.pi):
        raise ValidationError(f"delta_angle must lie in [-π, π], got {delta_angle!r}")
    quad_points = int(quad_points)
    if quad_points < 1000:
        raise ValidationError(f"quad_points must be >= 1000, got {quad_points}")

    omega = math.sqrt(kick_strength / detuning)
    sin_wt = math.sin(omega * t)
    cos_wt = math.cos(omega * t)
    if abs(sin_wt) < 1e-9:
        raise ValidationError(
            f"t = {t!r} sits at a half period of the pendulum frequency, "
            "where the focusing integral degenerates"
        )
    quartic = (omega * omega * t) / 24.0
    prefactor = math.sqrt(omega / (2.0 * np.pi * abs(sin_wt))) / math.sqrt(2.0 * np.pi)

    def quadrature(n_nodes: int) -> complex:
        nodes = np.linspace(-np.pi, np.pi, n_nodes)
        phase = (omega / (2.0 * sin_wt)) * (
            (delta_angle * delta_angle + nodes * nodes) * cos_wt
            - 2.0 * delta_angle * nodes
        ) - quartic * nodes**4
        return complex(np.trapezoid(np.exp(1j * phase), nodes))

    coarse = quadrature(quad_points)
    fine = quadrature(2 * quad_points - 1)
    if abs(fine) == 0.0 or abs(fine - coarse) > 1e-4 * abs(fine):
        raise QuadratureError(
            f"focusing integral not converged at {quad_points} nodes "
            f"(relative change {abs(fine - coarse) / max(abs(fine), 1e-300):.2e}); "
            "increase quad_points"
        )
    return prefactor * fine
