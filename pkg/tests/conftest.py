import math

import numpy as np
import pytest

from briodelta import BrioState, RiemannData, TransState, project
from briodelta.wave_curves import shock_q_1, shock_q_2


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def base_left():
    return TransState(1.0, 5.0)


@pytest.fixture
def fixture_pair():
    """The transformed pair used throughout: left (1,5), right (0.7,7)."""
    return TransState(1.0, 5.0), TransState(0.7, 7.0)


def region_iv_pair():
    """Forward-constructed two-shock data from the (1,5) base."""
    left = TransState(1.0, 5.0)
    mid = TransState(0.4, shock_q_1(left, 0.4))
    right = TransState(0.1, shock_q_2(mid, 0.1))
    return left, right, mid


def brio_data_from_trans(left: TransState, right: TransState,
                         s_left: float = 1.0,
                         s_right: float = 1.0) -> RiemannData:
    return RiemannData(project(left, s_left), project(right, s_right))


def random_above_critical(rng, u_range=(-2.0, 3.0),
                          slack=(0.05, 4.0)) -> TransState:
    u = float(rng.uniform(*u_range))
    return TransState(u, 0.5 * u * u + float(rng.uniform(*slack)))


def max_residual(results) -> float:
    return max(max(ru, rv) for ru, rv in results)


def data_scale(data: RiemannData) -> float:
    return 1.0 + max(abs(data.left.u), abs(data.left.v),
                     abs(data.right.u), abs(data.right.v))


def assert_close(a: float, b: float, tol: float, label: str = "") -> None:
    assert abs(a - b) <= tol, f"{label} |{a!r} - {b!r}| > {tol:g}"


def is_sorted(xs) -> bool:
    return all(a <= b for a, b in zip(xs, xs[1:]))


def critical_slack(t: TransState) -> float:
    return t.q - 0.5 * t.u * t.u


def finite(x: float) -> bool:
    return math.isfinite(x)
