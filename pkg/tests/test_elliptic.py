"""Elliptic integral and Jacobi function accuracy.

Reference values were computed once with 50-digit arbitrary-precision
arithmetic and frozen here; the quadrature cross-check below is an
independent oracle computed at test time.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from rotor_caustics.elliptic import (
    ValidationError,
    complete_k,
    complete_k_values,
    jacobi,
    jacobi_values,
)

# k -> K(k), 50-digit reference, rounded to double precision
COMPLETE_K_REFERENCE = {
    0.1: 1.574745561517356,
    0.5: 1.685750354812596,
    0.9: 2.2805491384227702,
    0.99: 3.3566005233611924,
    0.999: 4.4955963958421442,
}

# (u, k) -> (sn, cn, dn), 50-digit reference
JACOBI_REFERENCE = {
    (0.7, 0.5): (0.6342932763351124, 0.77309251684133428, 0.94837651273058064),
    (3.2, 0.95): (0.97982239008757439, -0.19987016756653105, 0.36544923820480672),
    (-1.4, 0.2): (-0.98327765743423916, 0.18211273538837149, 0.98047264211482484),
    (12.0, 0.8): (-0.028177216699254801, -0.99960294340257084, 0.9997459019439956),
    (2.5, 0.999): (0.98707010215480502, 0.16028915569090373, 0.16625358311282197),
}


@pytest.mark.parametrize("k,expected", sorted(COMPLETE_K_REFERENCE.items()))
def test_complete_k_against_reference(k, expected):
    assert complete_k(k) == pytest.approx(expected, rel=2e-15)


@pytest.mark.parametrize("u,k", sorted(JACOBI_REFERENCE))
def test_jacobi_against_reference(u, k):
    expected = JACOBI_REFERENCE[(u, k)]
    got = jacobi(u, k)
    assert (got.sn, got.cn, got.dn) == pytest.approx(expected, abs=5e-15)


def test_complete_k_against_quadrature():
    for k in np.linspace(0.0, 0.99, 34):
        integral, _ = quad(
            lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0.0, math.pi / 2
        )
        assert complete_k(k) == pytest.approx(integral, rel=1e-10)


def test_complete_k_limits_and_monotonicity():
    assert complete_k(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    ks = np.linspace(0.0, 0.9999, 200)
    values = complete_k_values(ks)
    assert np.all(np.diff(values) > 0)


def test_complete_k_even_in_k():
    for k in (0.3, 0.77, 0.999):
        assert complete_k(-k) == complete_k(k)


def test_complete_k_rejects_unit_modulus():
    for bad in (1.0, -1.0, 1.5, np.nan):
        with pytest.raises(ValidationError):
            complete_k(bad)
    with pytest.raises(ValidationError):
        complete_k_values([0.5, 1.0])


def test_jacobi_identities_random_sweep():
    rng = np.random.default_rng(11)
    u = rng.uniform(-20.0, 20.0, size=10_000)
    k = rng.uniform(-0.999, 0.999, size=10_000)
    sn, cn, dn = jacobi_values(u, k)
    assert np.max(np.abs(sn**2 + cn**2 - 1.0)) < 1e-12
    assert np.max(np.abs(dn**2 + (k * sn) ** 2 - 1.0)) < 1e-12


def test_jacobi_trigonometric_degeneration():
    for u in (-3.0, 0.0, 0.4, 2.0):
        got = jacobi(u, 0.0)
        assert got.sn == pytest.approx(math.sin(u), abs=1e-14)
        assert got.cn == pytest.approx(math.cos(u), abs=1e-14)
        assert got.dn == pytest.approx(1.0, abs=1e-14)


def test_jacobi_hyperbolic_degeneration():
    for u in (-2.0, 0.3, 1.7):
        got = jacobi(u, 1.0)
        assert got.sn == pytest.approx(math.tanh(u), abs=1e-12)
        assert got.cn == pytest.approx(1.0 / math.cosh(u), abs=1e-12)
        assert got.dn == pytest.approx(1.0 / math.cosh(u), abs=1e-12)


def test_jacobi_even_in_k_and_odd_in_u():
    got_plus = jacobi(1.3, 0.6)
    got_minus_k = jacobi(1.3, -0.6)
    assert (got_plus.sn, got_plus.cn, got_plus.dn) == (
        got_minus_k.sn,
        got_minus_k.cn,
        got_minus_k.dn,
    )
    got_minus_u = jacobi(-1.3, 0.6)
    assert got_minus_u.sn == pytest.approx(-got_plus.sn, abs=1e-15)
    assert got_minus_u.cn == pytest.approx(got_plus.cn, abs=1e-15)
    assert got_minus_u.dn == pytest.approx(got_plus.dn, abs=1e-15)


def test_jacobi_quarter_and_full_period():
    for k in (0.2, 0.6, 0.95):
        quarter = complete_k(k)
        at_quarter = jacobi(quarter, k)
        assert at_quarter.sn == pytest.approx(1.0, abs=1e-12)
        assert at_quarter.cn == pytest.approx(0.0, abs=1e-12)
        assert at_quarter.dn == pytest.approx(math.sqrt(1.0 - k * k), abs=1e-12)
        for u in (0.3, 1.1):
            base = jacobi(u, k)
            shifted = jacobi(u + 4.0 * quarter, k)
            assert shifted.sn == pytest.approx(base.sn, abs=1e-12)
            assert shifted.cn == pytest.approx(base.cn, abs=1e-12)
            assert shifted.dn == pytest.approx(base.dn, abs=1e-12)


def test_jacobi_rejects_bad_arguments():
    with pytest.raises(ValidationError):
        jacobi(np.inf, 0.5)
    with pytest.raises(ValidationError):
        jacobi(0.5, 1.0001)
    with pytest.raises(ValidationError):
        jacobi_values([0.1, np.nan], 0.5)
    with pytest.raises(ValidationError):
        jacobi_values([0.1], [1.2])


def test_jacobi_values_broadcasts():
    u = np.linspace(-2.0, 2.0, 7)
    sn, cn, dn = jacobi_values(u, 0.5)
    assert sn.shape == cn.shape == dn.shape == (7,)
    point = jacobi(float(u[3]), 0.5)
    assert sn[3] == pytest.approx(point.sn, abs=1e-15)
