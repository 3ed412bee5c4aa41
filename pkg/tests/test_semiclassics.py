"""Pendulum reduction, discrete action, tangent solutions, and caustic times."""

import math

import numpy as np
import pytest

from rotor_caustics import _kernels
from rotor_caustics.errors import SeparatrixError, ValidationError
from rotor_caustics.semiclassics import (
    caustic_curve,
    caustic_kicks,
    complete_k,
    discrete_action,
    fluctuation_determinant,
    launch_modulus,
    mean_caustic_kicks,
    pendulum_angle,
    solve_caustic_time,
    variational_derivative,
)

K, DELTA = 5.0, 1e-4

# 50-digit references at kick 5, detuning 1e-4
PENDULUM_REFERENCE = {
    (2.0, 0.3): 2.6975427110766095,
    (1.0, 0.05): 3.5057830685490878,
}
#: exact focusing-time root for modulus 0.3, first branch (50-digit bisection)
CAUSTIC_TIME_REFERENCE = 0.0075421188620667917
#: quarter-period estimate K(0.3)/sqrt(K·Δ) for the same point
CAUSTIC_KICKS_ESTIMATE = 71.914120505786983
MEAN_CAUSTIC_KICKS = {0: 70.248147310407262, 1: 210.74444193122179}


def unwrapped_rest_path(theta0: float, n_steps: int) -> np.ndarray:
    thetas, _ = _kernels.map_trajectories(
        np.array([theta0]), np.array([0.0]), K * DELTA, 1.0, n_steps, False
    )
    return thetas[:, 0].copy()


def test_launch_modulus_closed_form():
    assert launch_modulus(np.pi) == 0.0
    assert launch_modulus(2.0) == pytest.approx(-math.cos(1.0), abs=1e-15)
    assert launch_modulus(np.pi + 1.0) == pytest.approx(math.sin(0.5), abs=1e-15)


def test_launch_modulus_domain():
    with pytest.raises(ValidationError):
        launch_modulus(-0.1)
    with pytest.raises(ValidationError):
        launch_modulus(2.0 * np.pi + 0.1)
    for separatrix in (0.0, 2.0 * np.pi):
        with pytest.raises(SeparatrixError):
            launch_modulus(separatrix)


@pytest.mark.parametrize("theta0,t", sorted(PENDULUM_REFERENCE))
def test_pendulum_angle_against_reference(theta0, t):
    assert pendulum_angle(theta0, t, K, DELTA) == pytest.approx(
        PENDULUM_REFERENCE[(theta0, t)], abs=1e-12
    )


def test_pendulum_angle_initial_condition_and_period():
    for theta0 in (1.0, 2.5, 4.0):
        assert pendulum_angle(theta0, 0.0, K, DELTA) == pytest.approx(
            theta0, abs=1e-12
        )
    k = launch_modulus(2.0)
    period = 4.0 * complete_k(k) / math.sqrt(K / DELTA)
    t = np.array([0.013, 0.027, 0.05])
    np.testing.assert_allclose(
        pendulum_angle(2.0, t, K, DELTA),
        pendulum_angle(2.0, t + period, K, DELTA),
        rtol=0,
        atol=1e-12,
    )


def test_pendulum_angle_validations():
    with pytest.raises(ValidationError):
        pendulum_angle(2.0, 0.1, K, 0.0)
    with pytest.raises(ValidationError):
        pendulum_angle(2.0, 0.1, -1.0, DELTA)
    # the closed-form solution is even in time for a rest launch
    assert pendulum_angle(2.0, -0.1, K, DELTA) == pendulum_angle(2.0, 0.1, K, DELTA)


def test_map_follows_pendulum_on_staggered_times():
    # the drift-then-kick map updates momentum on half steps, so a rest
    # launch matches the continuum pendulum sampled at |n - 1/2|·Δ
    kicks = np.arange(61)
    times = np.abs(kicks - 0.5) * DELTA
    for theta0 in (1.0, 2.0, 5.0):
        wrapped, _ = _kernels.map_trajectories(
            np.array([theta0]), np.array([0.0]), K * DELTA, 1.0, 60, True
        )
        continuum = pendulum_angle(theta0, times, K, DELTA)
        assert np.max(np.abs(wrapped[:, 0] - continuum)) < 1e-3


def test_discrete_action_is_stationary_on_map_paths():
    path = unwrapped_rest_path(2.0, 40)
    h = 1e-6

    def gradient(p, j):
        up, down = p.copy(), p.copy()
        up[j] += h
        down[j] -= h
        return (discrete_action(up, K, DELTA) - discrete_action(down, K, DELTA)) / (
            2.0 * h
        )

    for j in (5, 17, 33):
        assert abs(gradient(path, j)) < 1e-6
    bent = path.copy()
    bent[17] += 0.05
    assert abs(gradient(bent, 17)) > 1.0


def test_discrete_action_validations():
    with pytest.raises(ValidationError):
        discrete_action([1.0], K, DELTA)
    with pytest.raises(ValidationError):
        discrete_action(np.ones((2, 2)), K, DELTA)


def test_tangent_solutions_initial_conditions():
    assert variational_derivative(2.0, 0.0, K, DELTA) == pytest.approx(1.0, abs=1e-12)
    assert fluctuation_determinant(2.0, 0.0, K, DELTA) == pytest.approx(
        0.0, abs=1e-12
    )


def test_tangent_solutions_harmonic_limit():
    # launches next to the stable equilibrium see a harmonic well with
    # frequency sqrt(K/Δ): u -> cos(ωt), v -> sin(ωt)/ω
    omega = math.sqrt(K / DELTA)
    t = np.linspace(1e-9, 0.06, 400)
    u = variational_derivative(np.pi + 1e-4, t, K, DELTA)
    v = fluctuation_determinant(np.pi + 1e-4, t, K, DELTA)
    assert np.max(np.abs(u - np.cos(omega * t))) < 1e-6
    assert np.max(np.abs(v - np.sin(omega * t) / omega)) < 1e-6


def test_tangent_solution_zeros_interlace():
    # conjugate points of the two independent tangent solutions must
    # alternate along the trajectory (Sturm separation)
    k = launch_modulus(2.0)
    period = 4.0 * complete_k(k) / math.sqrt(K / DELTA)
    t = np.linspace(1e-6, 1.5 * period, 60_001)
    u = variational_derivative(2.0, t, K, DELTA)
    v = fluctuation_determinant(2.0, t, K, DELTA)
    zeros_u = t[np.nonzero(np.diff(np.sign(u)))[0]]
    zeros_v = t[np.nonzero(np.diff(np.sign(v)))[0]]
    assert len(zeros_u) == 3 and len(zeros_v) == 2
    merged = np.sort(np.concatenate([zeros_u, zeros_v]))
    np.testing.assert_array_equal(
        merged, [zeros_u[0], zeros_v[0], zeros_u[1], zeros_v[1], zeros_u[2]]
    )


def test_tangent_solution_validations():
    with pytest.raises(ValidationError):
        variational_derivative(2.0, [], K, DELTA)
    with pytest.raises(ValidationError):
        variational_derivative(2.0, [-0.1], K, DELTA)


def test_caustic_time_against_reference():
    t = solve_caustic_time(0.3, K, DELTA)
    assert t == pytest.approx(CAUSTIC_TIME_REFERENCE, rel=1e-9)
    # the root sits near, but not on, the quarter-period estimate
    assert caustic_kicks(0.3, K, DELTA) == pytest.approx(
        CAUSTIC_KICKS_ESTIMATE, rel=1e-12
    )
    assert t / DELTA == pytest.approx(75.421188620667917, rel=1e-9)


def test_caustic_time_matches_variational_zero():
    # the launch-grid caustic is where the sensitivity to the launch angle
    # changes sign, i.e. a zero of the variational tangent solution
    t_root = solve_caustic_time(0.3, K, DELTA)
    theta0 = np.pi + 2.0 * math.asin(0.3)
    probe = np.array([t_root - 1e-5, t_root + 1e-5])
    u = variational_derivative(theta0, probe, K, DELTA)
    assert u[0] * u[1] < 0


def test_mean_caustic_kicks_frozen_values():
    for branch, expected in MEAN_CAUSTIC_KICKS.items():
        assert mean_caustic_kicks(K, DELTA, branch) == pytest.approx(
            expected, rel=1e-12
        )


def test_caustic_time_validations():
    with pytest.raises(ValidationError):
        solve_caustic_time(0.3, 0.0, DELTA)
    with pytest.raises(SeparatrixError):
        solve_caustic_time(1.0, K, DELTA)
    with pytest.raises(ValidationError):
        caustic_kicks(0.3, K, DELTA, branch=-1)
    with pytest.raises(ValidationError):
        mean_caustic_kicks(K, DELTA, branch=1.5)


def test_caustic_curve_points_and_symmetry():
    grid = np.array([-0.5, -0.3, 0.0, 0.3, 0.5])
    curve = caustic_curve(K, DELTA, 0, k_grid=grid)
    assert curve.failures == ()
    assert [p.modulus for p in curve.points] == pytest.approx(list(grid))

    by_k = {p.modulus: p for p in curve.points}
    center = by_k[0.0]
    assert center.theta == pytest.approx(np.pi, abs=1e-12)
    assert center.kick_index == 70

    for k in (0.3, 0.5):
        left, right = by_k[-k], by_k[k]
        assert left.time == pytest.approx(right.time, rel=1e-10)
        assert left.kick_index == right.kick_index
        assert left.theta == pytest.approx(2.0 * np.pi - right.theta, abs=1e-8)
        assert math.isclose(right.time / DELTA, right.kick_index, abs_tol=1.0)


def test_caustic_curve_second_branch_is_later():
    first = caustic_curve(K, DELTA, 0, k_grid=np.array([0.3])).points[0]
    second = caustic_curve(K, DELTA, 1, k_grid=np.array([0.3])).points[0]
    assert second.branch == 1
    assert second.time > 2.5 * first.time
