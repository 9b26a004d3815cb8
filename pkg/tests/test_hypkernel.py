import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bersdec import hypkernel as hk
from bersdec.errors import DegenerateBound, DegenerateLength, NonHyperbolicTrace

mpmath.mp.dps = 40
ASINH1 = float(mpmath.asinh(1))


def mp_length(t):
    return float(2 * mpmath.acosh(mpmath.mpf(abs(t)) / 2))


def test_parabolic_trace_rejected():
    with pytest.raises(NonHyperbolicTrace):
        hk.length_from_trace(2.0)
    with pytest.raises(NonHyperbolicTrace):
        hk.length_from_trace(-1.0)


@pytest.mark.parametrize("t,expected", [
    (2 * math.cosh(0.5), 1.0),
    (-3.0, float(2 * mpmath.acosh(1.5))),
])
def test_length_from_trace_values(t, expected):
    assert hk.length_from_trace(t) == pytest.approx(expected, abs=1e-12)


@given(st.floats(min_value=1e-3, max_value=50.0))
def test_length_trace_round_trip(length):
    assert hk.length_from_trace(hk.trace_from_length(length)) == pytest.approx(length, rel=1e-9, abs=1e-9)


@given(st.floats(min_value=2.0 + 1e-6, max_value=1e8))
def test_length_matches_mpmath(t):
    assert hk.length_from_trace(-t) == pytest.approx(mp_length(t), rel=1e-9, abs=1e-9)


def test_collar_fixed_point_and_values():
    assert hk.collar_halfwidth(2 * ASINH1) == pytest.approx(ASINH1, abs=1e-12)
    assert hk.collar_halfwidth(2.0) == pytest.approx(float(mpmath.asinh(1 / mpmath.sinh(1))), abs=1e-12)
    assert hk.collar_halfwidth(20.0) == pytest.approx(9.08e-5, rel=1e-2)
    with pytest.raises(DegenerateLength):
        hk.collar_halfwidth(0.0)


def test_crossing_bound_values():
    assert hk.crossing_length_bound(2 * ASINH1, 2 * ASINH1) == pytest.approx(0.0, abs=1e-6)
    expected = float(2 * mpmath.acosh(mpmath.sinh(1) ** 2))
    assert hk.crossing_length_bound(2.0, 2.0) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(1.6949, abs=1e-4)
    with pytest.raises(DegenerateBound):
        hk.crossing_length_bound(0.5, 0.5)


def test_crossing_bound_shortens_arcs():
    # for a short enough gamma the projected curve is shorter than the arc it replaces
    for lg in np.linspace(0.05, 2 * ASINH1, 40):
        for la in np.linspace(0.05, 30.0, 200):
            if math.sinh(lg / 2) * math.sinh(la / 2) < 1.0:
                continue
            assert hk.crossing_length_bound(lg, la) < la


def test_pentagon_side():
    assert hk.pentagon_side(0.0) == pytest.approx(2 * ASINH1, abs=1e-12)
    expected = float(2 * mpmath.asinh(mpmath.sqrt(mpmath.cosh(1))))
    assert hk.pentagon_side(8.0) == pytest.approx(expected, abs=1e-12)
    assert hk.pentagon_side(8.0) > hk.pentagon_side(0.0)


def _random_sl2(rng, scale=2.0):
    a, b, c = rng.uniform(-scale, scale, 3)
    if abs(a) < 0.1:
        a = 0.5
    return hk.Mat2(a, b, c, (1 + b * c) / a)


def test_trace_cyclic_and_conjugation():
    rng = np.random.default_rng(0)
    for _ in range(200):
        A, B, C = (_random_sl2(rng) for _ in range(3))
        assert (A @ B).tr == pytest.approx((B @ A).tr, abs=1e-9)
        assert hk.conjugate(C, A).tr == pytest.approx(A.tr, abs=1e-9)


def test_zero_twist_is_identity():
    M = hk.Mat2(2.0, 1.0, 1.0, 1.0)
    W = hk.Mat2(1.5, 0.3, 0.7, (1 + 0.21) / 1.5)
    T = hk.twist_along_axis(M, 0.0)
    assert (T @ W @ T.inv()).tr == pytest.approx(W.tr, abs=1e-12)


def test_twist_by_translation_length_is_the_element():
    # translating along the axis by the full length reproduces M up to sign
    M = hk.Mat2(3.0, 1.0, 2.0, 1.0)
    ell = hk.length_from_trace(M.tr)
    T = hk.twist_along_axis(M, ell)
    assert T.close_to(M, 1e-9)


def _rotation(theta):
    return hk.Mat2(math.cos(theta), -math.sin(theta), math.sin(theta), math.cos(theta))


def test_long_products_keep_determinant():
    # 64 factors: rotations mixed with mild hyperbolics, so entries stay <= 1e3
    rng = np.random.default_rng(1)
    checked = 0
    for _ in range(200):
        ms = []
        for _ in range(64):
            lam = rng.uniform(1.0, 1.25)
            ms.append(_rotation(rng.uniform(0, 2 * math.pi)) @ hk.Mat2(lam, 0.0, 0.0, 1 / lam))
        with mpmath.workdps(60):
            exact = hk.product([hk.to_mp(m) for m in ms], renorm_every=10**9)
            biggest = max(abs(x) for x in exact)
        if biggest > 1e3:
            continue
        checked += 1
        prod = hk.product(ms)
        assert abs(prod.det - 1.0) <= 1e-6
        assert max(abs(float(x) - float(y)) for x, y in zip(prod, exact)) <= 1e-6 * float(biggest)
    assert checked >= 100
