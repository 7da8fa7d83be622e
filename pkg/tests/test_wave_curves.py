"""Shock loci, rarefaction integration, and composite wave curves."""

from __future__ import annotations

import math

import numpy as np
import pytest

from briodelta.core import TransState, family_lambda
from briodelta.errors import DomainError, PreconditionError
from briodelta.wave_curves import (
    Backward2Curve,
    Forward1Curve,
    _backward2_cached,
    _forward1_cached,
    backward_2_curve,
    backward_curve_2,
    forward_1_curve,
    forward_curve_1,
    integrate_rarefaction,
    inverse_radicand,
    inverse_shock_q_2,
    shock_q_1,
    shock_q_2,
    shock_radicand,
    tabulate_curve,
)

from conftest import assert_close, random_above_critical


def _rk4_curve(family: int, u0: float, q0: float, u1: float, n: int) -> float:
    """Fixed-step RK4 oracle for dq/du = lambda_family(u, q)."""
    h = (u1 - u0) / n
    u, q = u0, q0

    def f(uu: float, qq: float) -> float:
        s = math.sqrt(8.0 * qq - 4.0 * uu * uu + 1.0)
        return 0.5 * ((2.0 * uu - 1.0) - s) if family == 1 else 0.5 * ((2.0 * uu - 1.0) + s)

    for _ in range(n):
        k1 = f(u, q)
        k2 = f(u + 0.5 * h, q + 0.5 * h * k1)
        k3 = f(u + 0.5 * h, q + 0.5 * h * k2)
        k4 = f(u + h, q + h * k3)
        q += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        u += h
    return q


def test_shock_loci_frozen_values(base_left):
    # Hand-computed at u = 0.7 from the locus quadratic through (1, 5):
    # radicand 9.43, roots 4.94 +- 0.3 sqrt(9.43).
    rad = shock_radicand(base_left, 0.7)
    assert_close(rad, 9.43, 1e-12)
    assert_close(shock_q_1(base_left, 0.7), 5.861249151967046, 1e-12)
    assert_close(shock_q_2(base_left, 0.7), 4.018750848032955, 1e-12)


def test_shock_loci_sum_identity(rng):
    # The two roots of the locus quadratic sum to 2 q_base - (u_base - u)(2u - 1).
    for _ in range(300):
        base = random_above_critical(rng)
        u = base.u - float(rng.uniform(0.0, 4.0))
        total = shock_q_1(base, u) + shock_q_2(base, u)
        expected = 2.0 * base.q - (base.u - u) * (2.0 * u - 1.0)
        scale = 1.0 + abs(expected)
        assert abs(total - expected) <= 1e-12 * scale


def test_shock_radicand_positive_leftward(rng):
    # At the base the radicand is 2(q - u^2/2) + 1/4 >= 1/4 and it grows as
    # u decreases, so both branches extend to arbitrary u below the base.
    for _ in range(200):
        base = random_above_critical(rng)
        at_base = shock_radicand(base, base.u)
        assert at_base >= 0.25 - 1e-12
        u = base.u - float(rng.uniform(0.0, 6.0))
        assert shock_radicand(base, u) >= at_base - 1e-12


def test_shock_loci_reject_wrong_side(base_left):
    with pytest.raises(PreconditionError):
        shock_q_1(base_left, base_left.u + 0.1)
    with pytest.raises(PreconditionError):
        shock_q_2(base_left, base_left.u + 0.1)
    with pytest.raises(PreconditionError):
        inverse_shock_q_2(base_left, base_left.u - 0.1)


def test_inverse_locus_frozen_value():
    # From right state (0.7, 7) at u = 1: radicand 54.56 by hand, so the
    # left-state energy is 7.15 + 0.15 sqrt(54.56).
    right = TransState(0.7, 7.0)
    assert_close(inverse_radicand(right, 1.0), 54.56, 1e-12)
    assert_close(inverse_shock_q_2(right, 1.0), 7.15 + 0.15 * math.sqrt(54.56), 1e-12)


def test_inverse_locus_round_trip(base_left, rng):
    down = shock_q_2(base_left, 0.7)
    assert_close(inverse_shock_q_2(TransState(0.7, down), 1.0), 5.0, 1e-12)
    # The family-2 downstream energy falls below the critical curve for
    # large jumps, so keep shrinking the jump until the state is admissible.
    done = 0
    while done < 200:
        left = random_above_critical(rng)
        du = float(rng.uniform(1e-3, 4.0))
        while du > 1e-4:
            u_r = left.u - du
            q_r = shock_q_2(left, u_r)
            if q_r >= 0.5 * u_r * u_r + 1e-9:
                back = inverse_shock_q_2(TransState(u_r, q_r), left.u)
                assert abs(back - left.q) <= 1e-11 * (1.0 + abs(left.q))
                done += 1
                break
            du *= 0.5


def test_inverse_locus_forward_round_trip(rng):
    for _ in range(200):
        right = random_above_critical(rng)
        u_l = right.u + float(rng.uniform(1e-3, 4.0))
        q_l = inverse_shock_q_2(right, u_l)
        down = shock_q_2(TransState(u_l, q_l), right.u)
        assert abs(down - right.q) <= 1e-11 * (1.0 + abs(right.q))


def test_rarefaction_matches_rk4_oracle(base_left):
    crv = integrate_rarefaction(1, base_left, 2.0)
    oracle = _rk4_curve(1, 1.0, 5.0, 2.0, 10000)
    assert_close(crv.q_at(2.0), oracle, 1e-8)
    assert_close(crv.q_at(2.0), 3.554245455532629, 1e-10)

    back = backward_curve_2(TransState(0.7, 7.0))
    oracle2 = _rk4_curve(2, 0.7, 7.0, -1.0, 17000)
    assert_close(back.q(-1.0), oracle2, 1e-8)


def test_critical_curve_is_family_2_integral_curve():
    for u0 in (-2.0, 0.0, 1.0, 3.0):
        base = TransState(u0, 0.5 * u0 * u0)
        crv = integrate_rarefaction(2, base, u0 + 5.0)
        u1 = u0 + 5.0
        assert abs(crv.q_at(u1) - 0.5 * u1 * u1) <= 1e-8
        assert max(abs(s.q - 0.5 * s.u * s.u) for s in crv.samples) <= 1e-8
        # Independent fixed-step confirmation; deviations amplify like
        # exp(2 du) along the critical curve, hence the looser bound.
        oracle = _rk4_curve(2, u0, 0.5 * u0 * u0, u1, 50000)
        assert abs(oracle - 0.5 * u1 * u1) <= 2e-7


def test_rarefaction_zero_length(base_left):
    crv = integrate_rarefaction(1, base_left, base_left.u)
    assert len(crv.samples) == 1
    assert crv.q_at(base_left.u) == base_left.q


def test_rarefaction_argument_errors(base_left):
    with pytest.raises(ValueError):
        integrate_rarefaction(3, base_left, 2.0)
    with pytest.raises(PreconditionError):
        integrate_rarefaction(1, base_left, math.nan)
    with pytest.raises(PreconditionError):
        integrate_rarefaction(1, base_left, base_left.u - 0.5)


def test_family_1_stops_on_critical_curve(base_left):
    with pytest.raises(DomainError):
        integrate_rarefaction(1, base_left, 3.5)
    with pytest.raises(DomainError):
        integrate_rarefaction(1, TransState(1.0, 0.5), 1.5)


def test_forward_curve_crossing(base_left):
    crv = forward_curve_1(base_left)
    star = crv.crossing(5.0)
    assert star is not None
    assert_close(star, 2.909122845035592, 1e-9)
    # Just below the crossing the curve sits above critical, at and past it
    # the composite continuation is the critical curve itself.
    u_in = star - 1e-3
    assert crv.q(u_in) > 0.5 * u_in * u_in
    assert crv.q(3.5) == 0.5 * 3.5 * 3.5
    assert forward_1_curve(base_left, -1.0) == shock_q_1(base_left, -1.0)
    assert_close(forward_1_curve(base_left, -1.0), 14.806859285554046, 1e-12)


def test_backward_curve_composite(base_left):
    right = TransState(0.7, 7.0)
    crv = backward_curve_2(right)
    assert crv.q(right.u) == right.q
    assert backward_2_curve(right, 1.0) == inverse_shock_q_2(right, 1.0)
    # The backward rarefaction branch approaches the critical curve from
    # above but never touches it.
    gap = crv.q(-10.0) - 0.5 * 100.0
    assert 0.0 <= gap <= 1e-5
    us = np.linspace(right.u, -10.0, 30)
    gaps = [crv.q(float(u)) - 0.5 * u * u for u in us]
    assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))


def test_curve_slope_bounds(base_left):
    # lambda_1 <= u - 1 and lambda_2 >= u wherever the state is admissible,
    # so rarefaction rows inherit those bounds.
    rows1 = tabulate_curve("rw1", base_left, np.linspace(1.0, 2.8, 40))
    assert np.all(rows1[:, 2] <= rows1[:, 0] - 1.0 + 1e-12)
    rows2 = tabulate_curve("rw2", base_left, np.linspace(1.0, 4.0, 40))
    assert np.all(rows2[:, 2] >= rows2[:, 0] - 1e-12)


def test_tabulate_shock_speed_column(base_left):
    us = np.linspace(-1.0, 1.0, 9)
    for kind, fn in (("sw1", shock_q_1), ("sw2", shock_q_2)):
        rows = tabulate_curve(kind, base_left, us)
        assert rows.shape == (9, 3)
        for u, q, lam in rows:
            assert q == fn(base_left, u)
            if abs(u - base_left.u) > 1e-13:
                assert_close(lam, (base_left.q - q) / (base_left.u - u), 1e-12)
    # At the base point the speed column degenerates to the characteristic.
    rows = tabulate_curve("sw1", base_left, np.array([1.0]))
    assert rows[0, 2] == family_lambda(1, base_left.u, base_left.q)


def test_tabulate_inverse_shock(base_left):
    right = TransState(0.7, 7.0)
    rows = tabulate_curve("sw2_inv", right, np.linspace(0.7, 2.0, 7))
    for u, q, lam in rows:
        assert q == inverse_shock_q_2(right, u)
        if abs(u - right.u) > 1e-13:
            assert_close(lam, (q - right.q) / (u - right.u), 1e-12)


def test_tabulate_rw1_truncates_at_crossing(base_left):
    rows = tabulate_curve("rw1", base_left, np.linspace(1.0, 3.5, 6))
    assert rows.shape == (4, 3)
    assert rows[-1, 0] == 2.5


def test_tabulate_argument_errors(base_left):
    with pytest.raises(PreconditionError):
        tabulate_curve("rw1", base_left, np.array([]))
    with pytest.raises(ValueError):
        tabulate_curve("bogus", base_left, np.array([1.0]))
    with pytest.raises(PreconditionError):
        tabulate_curve("rw1", base_left, np.array([0.0]))
    with pytest.raises(PreconditionError):
        tabulate_curve("rw2_inv", base_left, np.array([2.0]))


def test_ladder_values_independent_of_query_order():
    right = TransState(0.7, 7.0)

    _backward2_cached.cache_clear()
    warm = backward_curve_2(right)
    near_first = warm.q(-0.5)
    far_after = warm.q(-3.0)

    _backward2_cached.cache_clear()
    cold = backward_curve_2(right)
    far_first = cold.q(-3.0)
    near_after = cold.q(-0.5)

    assert near_first == near_after
    assert far_after == far_first

    left = TransState(1.0, 5.0)
    _forward1_cached.cache_clear()
    a = forward_curve_1(left)
    v1 = a.q(1.3)
    v2 = a.q(2.7)
    _forward1_cached.cache_clear()
    b = forward_curve_1(left)
    w2 = b.q(2.7)
    w1 = b.q(1.3)
    assert v1 == w1
    assert v2 == w2


def test_curve_objects_are_memoized(base_left):
    assert forward_curve_1(base_left) is forward_curve_1(TransState(1.0, 5.0))
    assert backward_curve_2(base_left) is backward_curve_2(TransState(1.0, 5.0))
    assert isinstance(forward_curve_1(base_left), Forward1Curve)
    assert isinstance(backward_curve_2(base_left), Backward2Curve)
