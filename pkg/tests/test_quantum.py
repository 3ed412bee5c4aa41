"""Exact quantum evolution against a dense-matrix oracle and its invariants."""

import numpy as np
import pytest

from rotor_caustics.core import (
    WaveState,
    angle_grid,
    make_params,
    momentum_values,
    to_angle,
    uniform_state,
)
from rotor_caustics.errors import (
    NormalizationError,
    TailMassError,
    ValidationError,
)
from rotor_caustics.quantum import evolve, floquet_step, peak_amplitude

UNIFORM_MAGNITUDE = 1.0 / np.sqrt(2.0 * np.pi)


def dense_step_matrix(kick_strength: float, detuning: float, m: int) -> np.ndarray:
    """One-period operator as an explicit M×M matrix on the sampled basis.

    Free rotation is diagonal in momentum; the kick is diagonal on the angle
    nodes; the change of basis is the sampled plane-wave matrix. This uses no
    FFT, so it is an independent oracle for the split-operator code.
    """
    nodes = angle_grid(m).nodes
    p = momentum_values(m)
    plane_waves = np.exp(1j * np.outer(nodes, p))  # W[j, p] = e^{i p θ_j}
    free = np.diag(np.exp(-0.5j * detuning * p.astype(float) ** 2))
    kick = np.diag(np.exp(-1j * kick_strength * np.cos(nodes)))
    return (plane_waves.conj().T / m) @ kick @ plane_waves @ free


def random_state(m: int, seed: int) -> WaveState:
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=m) + 1j * rng.normal(size=m)
    return WaveState(amplitudes=raw / np.linalg.norm(raw))


def test_step_matches_dense_matrix_oracle():
    m = 64
    matrix = dense_step_matrix(1.7, 0.3, m)
    for seed in range(10):
        state = random_state(m, 7 + seed)
        expected = state.amplitudes.copy()
        got = state
        for _ in range(10):
            expected = matrix @ expected
            got = floquet_step(got, make_params(1.7, 0.3, m, 10))
        np.testing.assert_allclose(got.amplitudes, expected, rtol=0, atol=1e-12)


def test_resonant_revival_of_the_uniform_state():
    # with zero detuning the free factor is the identity on integer momenta,
    # so each period only multiplies by a fixed angle-diagonal phase: the
    # magnitude profile never moves
    m = 256
    record = evolve(uniform_state(m), make_params(5.0, 0.0, m, 50))
    np.testing.assert_allclose(
        record.field.values, UNIFORM_MAGNITUDE, rtol=0, atol=1e-12
    )


def test_unitarity_over_long_runs():
    m = 512
    state = random_state(m, 99)
    params = make_params(2.0, 1e-3, m, 200)
    for _ in range(200):
        state = floquet_step(state, params)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_evolve_rows_match_repeated_steps():
    m = 128
    params = make_params(1.2, 0.01, m, 6)
    record = evolve(uniform_state(m), params)
    assert record.field.values.shape == (7, m)
    state = uniform_state(m)
    np.testing.assert_allclose(
        record.field.values[0], np.abs(to_angle(state)), rtol=0, atol=1e-14
    )
    for n in range(1, 7):
        state = floquet_step(state, params)
        np.testing.assert_allclose(
            record.field.values[n], np.abs(to_angle(state)), rtol=0, atol=1e-14
        )
    np.testing.assert_allclose(
        record.final_state.amplitudes, state.amplitudes, rtol=0, atol=1e-14
    )


def test_parity_symmetry_from_a_uniform_launch():
    # cos θ and the free rotation are both even under θ -> 2π - θ, and the
    # uniform launch shares that symmetry, so every recorded row must too
    m = 2048
    record = evolve(uniform_state(m), make_params(5.0, 1e-4, m, 50))
    values = record.field.values
    mirrored = values[:, (-np.arange(m)) % m]
    np.testing.assert_allclose(values, mirrored, rtol=0, atol=1e-12)


def test_evolution_record_reports_tail_mass():
    m = 2048
    record = evolve(uniform_state(m), make_params(5.0, 1e-4, m, 50))
    assert 0.0 <= record.tail_mass < 1e-10


def test_small_basis_raises_tail_error():
    with pytest.raises(TailMassError) as err:
        evolve(uniform_state(256), make_params(100.0, 1e-3, 256, 30))
    assert err.value.tail_mass > 1e-10


def test_zero_detuning_skips_the_tail_guard():
    # at exact resonance the full-period operator is angle-diagonal, so the
    # sampled evolution stays exact no matter how wide the momentum spread
    record = evolve(uniform_state(256), make_params(100.0, 0.0, 256, 30))
    np.testing.assert_allclose(
        record.field.values, UNIFORM_MAGNITUDE, rtol=0, atol=1e-12
    )


def test_evolve_validations():
    with pytest.raises(ValidationError):
        evolve(uniform_state(64), make_params(1.0, 0.1, 128, 5))
    with pytest.raises(ValidationError):
        evolve(uniform_state(64), make_params(1.0, 0.1, 64, 5, interaction=0.5))
    state = uniform_state(64)
    bad = WaveState.__new__(WaveState)
    object.__setattr__(bad, "amplitudes", state.amplitudes * 0.9)
    with pytest.raises(NormalizationError):
        floquet_step(bad, make_params(1.0, 0.1, 64, 5))


def test_peak_amplitude_window_and_tie_breaking():
    m = 256
    record = evolve(uniform_state(m), make_params(1.0, 0.05, m, 40))
    peak = peak_amplitude(record)
    block = record.field.values
    assert peak.amplitude == block.max()
    assert block[peak.kick, peak.node] == peak.amplitude

    windowed = peak_amplitude(record, window=(10, 20))
    assert 10 <= windowed.kick <= 20
    assert windowed.amplitude == block[10:21].max()

    # row 0 is the uniform profile: every node ties, argmax picks node 0
    flat = peak_amplitude(record, window=(0, 0))
    assert flat.kick == 0 and flat.node == 0
    assert flat.theta == 0.0

    with pytest.raises(ValidationError):
        peak_amplitude(record, window=(30, 50))
    with pytest.raises(ValidationError):
        peak_amplitude(record, window=(-1, 5))
