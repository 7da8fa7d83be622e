"""Elementary wave curves of the transformed system.

Shock loci are closed-form: eliminating the speed from the two jump
conditions c[u] = [q], c[q] = [G] leaves a quadratic in q_R whose two roots
are the family-1 (upper) and family-2 (lower) shock curves through a base
state.  Rarefaction curves solve dq/du = lambda_{-,+}(u, q), which is exact
because the eigenvector of each family is (1, lambda).  The critical curve
q = u^2/2 is itself an integral curve of the second family, so family-2
curves never cross it; the family-1 forward branch does reach it, at a
finite u, and stops there.

Composite curves (everything reachable from a left state with a family-1
wave, everything that reaches a right state with a family-2 wave) are the
objects the Riemann solver intersects.  They memoize their integrations per
base state and extend the integrated span through a fixed power-of-two
ladder, so values do not depend on query order.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .core import TOL_DOMAIN, TOL_ZERO, TransState, family_lambda
from .errors import DomainError, PreconditionError, StepFailure

# Adaptive integration tolerance (relative and absolute) for rarefactions.
TOL_ODE = 1e-10
# Width of the clamp band below the critical curve: integrated q values in
# [u^2/2 - TOL_CURVE, u^2/2] are rounding wobble and get clamped up.
TOL_CURVE = 1e-8


def shock_radicand(base: TransState, u: float) -> float:
    """Discriminant-quarter of the shock-locus quadratic at downstream velocity u."""
    a, qa = base.u, base.q
    return 2.0 * qa + 0.25 + 0.5 * (a - u) - (2.0 * a * a + 2.0 * a * u - u * u) / 3.0


def _checked_radicand(base: TransState, u: float) -> float:
    rad = shock_radicand(base, u)
    if rad < 0.0:
        if rad >= -TOL_DOMAIN * (1.0 + u * u):
            return 0.0
        raise DomainError(
            f"shock locus from {base} leaves the real branch at u={u!r} "
            f"(radicand {rad:.3e})"
        )
    return rad


def shock_q_1(base: TransState, u: float) -> float:
    """Family-1 shock locus through base, evaluated at u <= base.u (upper root)."""
    if u > base.u + TOL_ZERO:
        raise PreconditionError(
            f"family-1 shock branch needs u <= base.u, got u={u!r} > {base.u!r}"
        )
    u = min(u, base.u)
    rad = _checked_radicand(base, u)
    return base.q - 0.5 * (base.u - u) * (2.0 * u - 1.0) + (base.u - u) * math.sqrt(rad)


def shock_q_2(base: TransState, u: float) -> float:
    """Family-2 shock locus through base, evaluated at u <= base.u (lower root)."""
    if u > base.u + TOL_ZERO:
        raise PreconditionError(
            f"family-2 shock branch needs u <= base.u, got u={u!r} > {base.u!r}"
        )
    u = min(u, base.u)
    rad = _checked_radicand(base, u)
    return base.q - 0.5 * (base.u - u) * (2.0 * u - 1.0) - (base.u - u) * math.sqrt(rad)


def inverse_radicand(base_right: TransState, u: float) -> float:
    """Radicand of the inverse family-2 locus (left states reaching base_right)."""
    b, qb = base_right.u, base_right.q
    return (
        8.0 * qb + 1.0 + (4.0 * u * u - 8.0 * u * b - 8.0 * b * b) / 3.0
        - 2.0 * u + 2.0 * b
    )


def inverse_shock_q_2(base_right: TransState, u: float) -> float:
    """Left-state energy of the family-2 shock arriving at base_right, u >= base_right.u.

    Upper root of the same jump-condition quadratic solved for the left
    state; continuous at u = base_right.u with value base_right.q.
    """
    if u < base_right.u - TOL_ZERO:
        raise PreconditionError(
            f"inverse family-2 branch needs u >= base.u, got u={u!r} < {base_right.u!r}"
        )
    u = max(u, base_right.u)
    rad = inverse_radicand(base_right, u)
    if rad < 0.0:
        if rad >= -TOL_DOMAIN * (1.0 + u * u):
            rad = 0.0
        else:
            raise DomainError(
                f"inverse family-2 locus from {base_right} has negative radicand "
                f"{rad:.3e} at u={u!r}"
            )
    du = u - base_right.u
    return base_right.q + 0.5 * du * (2.0 * u - 1.0) + 0.5 * du * math.sqrt(rad)


@dataclass(frozen=True)
class CurveSample:
    """One point on a tabulated curve: state plus the curve's speed there."""

    u: float
    q: float
    lam: float


@dataclass(frozen=True)
class IntegralCurve:
    """Dense rarefaction curve of one family through a base state.

    `samples` are the accepted integrator steps (first sample is the base);
    `q_at` evaluates the dense interpolant at arbitrary u inside the
    integrated range, clamped up to the critical curve within TOL_CURVE.
    """

    family: int
    base: TransState
    direction: str  # "increasing-u" or "decreasing-u"
    samples: tuple[CurveSample, ...]
    interp: Callable = field(repr=False, compare=False)

    @property
    def u_start(self) -> float:
        return self.samples[0].u

    @property
    def u_end(self) -> float:
        return self.samples[-1].u

    def q_at(self, u):
        return self.interp(u)

    def lam_at(self, u):
        return family_lambda(self.family, u, self.interp(u))


def _clamped_eval(sol, family: int):
    """Wrap a scipy dense solution: scalar/array u -> q, clamped to >= u^2/2."""

    def interp(u):
        q = sol(np.atleast_1d(np.asarray(u, dtype=float)))[0]
        crit = 0.5 * np.square(np.atleast_1d(np.asarray(u, dtype=float)))
        q = np.maximum(q, crit)
        return float(q[0]) if np.ndim(u) == 0 else q

    return interp


def _rhs(family: int):
    def f(u, y):
        return [float(family_lambda(family, u, max(y[0], 0.5 * u * u)))]

    return f


def _critical_event(u, y):
    return y[0] - 0.5 * u * u


_critical_event.terminal = True
_critical_event.direction = -1


def _solve_segment(family: int, u0: float, q0: float, u1: float, rtol: float,
                   with_event: bool):
    events = [_critical_event] if with_event else None
    res = solve_ivp(
        _rhs(family), (u0, u1), [q0],
        method="RK45", dense_output=True, rtol=rtol, atol=rtol, events=events,
    )
    if res.status == -1:
        raise StepFailure(
            f"family-{family} rarefaction integration from u={u0!r} failed: {res.message}"
        )
    hit = res.status == 1
    return res, hit


def integrate_rarefaction(family: int, base: TransState, u_target: float, *,
                          rtol: float = TOL_ODE) -> IntegralCurve:
    """Integrate the rarefaction curve of a family from base to u_target.

    Family 1 integrates forward only (u_target >= base.u); family 2 may
    integrate backward, which is how inverse curves are built.  Raises
    DomainError if the family-1 branch would cross the critical curve
    before reaching u_target.
    """
    if family not in (1, 2):
        raise ValueError(f"family must be 1 or 2, got {family!r}")
    if not math.isfinite(u_target):
        raise PreconditionError(f"u_target must be finite, got {u_target!r}")
    if family == 1 and u_target < base.u - TOL_ZERO:
        raise PreconditionError(
            f"family-1 rarefactions integrate forward only (u_target {u_target!r} "
            f"< base.u {base.u!r})"
        )

    direction = "increasing-u" if u_target >= base.u else "decreasing-u"
    if abs(u_target - base.u) <= TOL_ZERO:
        lam = float(family_lambda(family, base.u, base.q))
        sample = CurveSample(base.u, base.q, lam)

        def interp(u):
            q = np.full_like(np.asarray(u, dtype=float), base.q)
            return float(base.q) if np.ndim(u) == 0 else q

        return IntegralCurve(family, base, direction, (sample,), interp)

    with_event = family == 1 and u_target > base.u
    res, hit = _solve_segment(family, base.u, base.q, u_target, rtol, with_event)
    if hit:
        u_stop = float(res.t_events[0][0])
        raise DomainError(
            f"family-1 rarefaction from {base} meets the critical curve at "
            f"u={u_stop!r} before reaching u_target={u_target!r}"
        )

    us = res.t
    qs = np.maximum(res.y[0], 0.5 * us * us)
    lams = np.asarray(family_lambda(family, us, qs), dtype=float)
    samples = tuple(
        CurveSample(float(u), float(q), float(l)) for u, q, l in zip(us, qs, lams)
    )
    return IntegralCurve(family, base, direction, samples, _clamped_eval(res.sol, family))


class _LadderCurve:
    """Lazily extended dense rarefaction curve in one direction from a base.

    The integrated span grows through the fixed ladder 1, 2, 4, ... u-units,
    stepping through every level, so segment boundaries (and hence values)
    do not depend on the order in which spans were requested.  Family-1
    forward extension stops at the critical-curve crossing, recorded in
    `stopped_at`.
    """

    def __init__(self, family: int, base: TransState, step: int, rtol: float = TOL_ODE):
        assert step in (1, -1)
        self.family = family
        self.base = base
        self.step = step
        self.rtol = rtol
        self.stopped_at: float | None = None
        self._level = 0.0  # current ladder span in u-units
        self._frontier = (base.u, base.q)
        self._segments: list = []  # (u_lo, u_hi, dense sol), in extension order
        self._lock = threading.Lock()
        self._with_event = family == 1 and step == 1

    def ensure(self, u: float) -> None:
        span = (u - self.base.u) * self.step
        if span <= self._level or self.stopped_at is not None:
            return
        with self._lock:
            while self._level < span and self.stopped_at is None:
                next_level = 1.0 if self._level == 0.0 else 2.0 * self._level
                u0, q0 = self._frontier
                u1 = self.base.u + self.step * next_level
                res, hit = _solve_segment(self.family, u0, q0, u1, self.rtol,
                                          self._with_event)
                u_end = float(res.t[-1])
                q_end = float(res.y[0][-1])
                if u_end != u0:
                    lo, hi = sorted((u0, u_end))
                    self._segments.append((lo, hi, _clamped_eval(res.sol, self.family)))
                self._frontier = (u_end, max(q_end, 0.5 * u_end * u_end))
                self._level = next_level
                if hit:
                    self.stopped_at = u_end

    def q_at(self, u: float) -> float:
        self.ensure(u)
        if self.stopped_at is not None and (u - self.stopped_at) * self.step >= 0.0:
            raise DomainError(
                f"family-{self.family} rarefaction from {self.base} ends on the "
                f"critical curve at u={self.stopped_at!r}; no value at u={u!r}"
            )
        if (u - self.base.u) * self.step <= 0.0:
            return self.base.q
        for lo, hi, interp in self._segments:
            if lo <= u <= hi:
                return float(interp(u))
        raise StepFailure(f"no integrated segment covers u={u!r}")  # pragma: no cover


class Forward1Curve:
    """Everything reachable from a fixed left state by one family-1 wave.

    Shock branch (closed form) for u < left.u, rarefaction branch for
    u >= left.u.  Beyond the rarefaction's critical-curve crossing u* the
    curve is continued along q = u^2/2 itself: the wave curve physically
    ends there, and the continuation keeps the middle-state root function
    defined on arbitrary brackets.
    """

    def __init__(self, left: TransState):
        self.left = left
        self._rw = _LadderCurve(1, left, +1)

    def crossing(self, u_probe: float) -> float | None:
        """Critical-curve crossing of the rarefaction branch, if at most u_probe."""
        self._rw.ensure(u_probe)
        return self._rw.stopped_at

    def q(self, u: float) -> float:
        if u < self.left.u:
            return shock_q_1(self.left, u)
        self._rw.ensure(u)
        stop = self._rw.stopped_at
        if stop is not None and u >= stop:
            return 0.5 * u * u
        return self._rw.q_at(u)


class Backward2Curve:
    """Everything connected to a fixed right state by one family-2 wave.

    Backward rarefaction branch for u < right.u (never reaches the critical
    curve), inverse shock branch (closed form) for u >= right.u.
    """

    def __init__(self, right: TransState):
        self.right = right
        self._rw = _LadderCurve(2, right, -1)

    def q(self, u: float) -> float:
        if u > self.right.u:
            return inverse_shock_q_2(self.right, u)
        if u >= self.right.u - TOL_ZERO:
            return self.right.q
        return self._rw.q_at(u)


@lru_cache(maxsize=256)
def _forward1_cached(u: float, q: float) -> Forward1Curve:
    return Forward1Curve(TransState(u, q))


@lru_cache(maxsize=256)
def _backward2_cached(u: float, q: float) -> Backward2Curve:
    return Backward2Curve(TransState(u, q))


def forward_curve_1(left: TransState) -> Forward1Curve:
    """Memoized composite family-1 curve object through a left state."""
    return _forward1_cached(left.u, left.q)


def backward_curve_2(right: TransState) -> Backward2Curve:
    """Memoized composite inverse family-2 curve object through a right state."""
    return _backward2_cached(right.u, right.q)


def forward_1_curve(left: TransState, u: float) -> float:
    """Energy on the composite family-1 curve through left, at velocity u."""
    return forward_curve_1(left).q(u)


def backward_2_curve(right: TransState, u: float) -> float:
    """Energy on the composite inverse family-2 curve through right, at velocity u."""
    return backward_curve_2(right).q(u)


_SHOCK_KINDS = {"sw1": (shock_q_1, 1), "sw2": (shock_q_2, 2)}


def tabulate_curve(kind: str, base: TransState, us) -> np.ndarray:
    """Tabulate one curve branch as rows (u, q, lambda).

    kind is one of sw1, sw2, sw2_inv, rw1, rw2, rw2_inv.  The lambda column
    is the characteristic speed of the family along rarefaction branches and
    the jump speed of the shock joining base to the row state along shock
    branches (equal to the characteristic speed in the zero-jump limit).
    Rows of the rw1 branch stop at the critical-curve crossing.
    """
    us = np.asarray(us, dtype=float)
    if us.ndim != 1 or us.size == 0:
        raise PreconditionError("us must be a non-empty 1-d array")

    if kind in _SHOCK_KINDS:
        fn, fam = _SHOCK_KINDS[kind]
        rows = []
        for u in us:
            q = fn(base, float(u))
            du = base.u - u
            if abs(du) <= TOL_ZERO:
                lam = float(family_lambda(fam, base.u, base.q))
            else:
                lam = (base.q - q) / du
            rows.append((float(u), q, lam))
        return np.asarray(rows)

    if kind == "sw2_inv":
        rows = []
        for u in us:
            q = inverse_shock_q_2(base, float(u))
            du = u - base.u
            if abs(du) <= TOL_ZERO:
                lam = float(family_lambda(2, base.u, base.q))
            else:
                lam = (q - base.q) / du
            rows.append((float(u), q, lam))
        return np.asarray(rows)

    if kind in ("rw1", "rw2", "rw2_inv"):
        if kind == "rw1":
            fam, ladder = 1, _LadderCurve(1, base, +1)
            valid = us >= base.u - TOL_ZERO
        elif kind == "rw2":
            fam, ladder = 2, _LadderCurve(2, base, +1)
            valid = us >= base.u - TOL_ZERO
        else:
            fam, ladder = 2, _LadderCurve(2, base, -1)
            valid = us <= base.u + TOL_ZERO
        if not valid.all():
            raise PreconditionError(
                f"{kind} branch from base.u={base.u!r} does not cover all requested u"
            )
        rows = []
        for u in us:
            u = float(u)
            try:
                q = base.q if abs(u - base.u) <= TOL_ZERO else ladder.q_at(u)
            except DomainError:
                break  # rw1 ended on the critical curve
            rows.append((u, q, float(family_lambda(fam, u, q))))
        return np.asarray(rows)

    raise ValueError(f"unknown curve kind {kind!r}")
