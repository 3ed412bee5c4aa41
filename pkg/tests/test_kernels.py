"""Cross-lane agreement between the compiled kernels and the numpy fallback."""

import numpy as np
import pytest

from rotor_caustics import _kernels


def _compiled_or_skip():
    try:
        return _kernels.get_backend("compiled")
    except ImportError:
        pytest.skip("compiled kernel lane not built")


def test_backend_name_is_a_known_lane():
    assert _kernels.backend_name() in ("compiled", "fallback")


def test_get_backend_rejects_unknown_lane():
    with pytest.raises(ValueError):
        _kernels.get_backend("gpu")


def test_fallback_lane_always_importable():
    lane = _kernels.get_backend("fallback")
    assert hasattr(lane, "map_trajectories")
    assert hasattr(lane, "jacobi_point")


def test_map_trajectories_cross_lane():
    compiled = _compiled_or_skip()
    fallback = _kernels.get_backend("fallback")
    rng = np.random.default_rng(42)
    thetas = rng.uniform(0.0, 2.0 * np.pi, size=64)
    ps = rng.normal(scale=0.5, size=64)
    for kick, period, wrap in [(0.9716, 4.0 * np.pi + 0.25, True), (5e-4, 1.0, False)]:
        tc, pc = compiled.map_trajectories(thetas, ps, kick, period, 50, wrap)
        tf, pf = fallback.map_trajectories(thetas, ps, kick, period, 50, wrap)
        # identical update rule, but fma/vectorization may differ by ulps that
        # the chaotic map amplifies over the horizon
        np.testing.assert_allclose(tc, tf, rtol=0, atol=1e-9)
        np.testing.assert_allclose(pc, pf, rtol=0, atol=1e-9)
        assert tc.shape == (51, 64)


def test_map_trajectories_wrap_flag():
    lane = _kernels.get_backend("fallback")
    thetas = np.array([1.0, 4.0])
    ps = np.array([2.0, -3.0])
    wrapped, _ = lane.map_trajectories(thetas, ps, 1.3, 7.0, 20, True)
    unwrapped, _ = lane.map_trajectories(thetas, ps, 1.3, 7.0, 8, False)
    assert wrapped.min() >= 0.0 and wrapped.max() < 2.0 * np.pi
    # The sequences agree up to rounding, which the chaotic map amplifies,
    # so compare only a short horizon, and on the circle so that points
    # next to the wrap seam cannot register as a full-turn discrepancy.
    gap = np.abs(np.mod(unwrapped, 2.0 * np.pi) - wrapped[:9])
    gap = np.minimum(gap, 2.0 * np.pi - gap)
    assert gap.max() < 1e-9


def test_elliptic_kernels_cross_lane():
    compiled = _compiled_or_skip()
    fallback = _kernels.get_backend("fallback")
    ks = np.linspace(-0.999, 0.999, 41)
    np.testing.assert_allclose(
        compiled.complete_k_batch(ks), fallback.complete_k_batch(ks), rtol=0, atol=5e-15
    )
    rng = np.random.default_rng(3)
    u = rng.uniform(-20.0, 20.0, size=500)
    k = rng.uniform(-0.999, 0.999, size=500)
    for channel_c, channel_f in zip(
        compiled.jacobi_batch(u, k), fallback.jacobi_batch(u, k)
    ):
        np.testing.assert_allclose(channel_c, channel_f, rtol=0, atol=5e-14)


def test_point_kernels_match_batch():
    lane = _kernels.get_backend(_kernels.backend_name())
    assert lane.complete_k_point(0.5) == pytest.approx(
        float(lane.complete_k_batch(np.array([0.5]))[0]), abs=1e-15
    )
    sn, cn, dn = lane.jacobi_point(0.7, 0.5)
    sb, cb, db = lane.jacobi_batch(np.array([0.7]), np.array([0.5]))
    assert (sn, cn, dn) == pytest.approx((sb[0], cb[0], db[0]), abs=1e-15)
