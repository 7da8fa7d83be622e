"""Riemann solver for the transformed system.

The middle state is the unique intersection of the composite family-1 curve
through the left state with the composite inverse family-2 curve through the
right state.  Bracketing uses an expanding window scan of the difference
function, then Brent's method; the four sign combinations of (u_M - u_L,
u_R - u_M) classify the fan into the four shock/rarefaction regions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import (
    TOL_ZERO,
    TransState,
    family_lambda,
    trans_flux_g,
    trans_lambdas,
    trans_shock_speed,
)
from .errors import BracketFailure, OrderingViolation, PreconditionError
from .wave_curves import (
    TOL_ODE,
    IntegralCurve,
    backward_curve_2,
    forward_curve_1,
    integrate_rarefaction,
)

TOL_ROOT = 1e-12
TOL_LAX = 1e-10
# Wave strengths with |u_M - u_neighbor| at or below this are zero.
TIE_TOL = 1e-10


class Region(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Wave:
    """One elementary wave: a shock (speed_lo == speed_hi) or a rarefaction."""

    kind: str  # "shock" or "rarefaction"
    family: int
    left: TransState
    right: TransState
    speed_lo: float
    speed_hi: float
    curve: IntegralCurve | None = None

    @property
    def speed_range(self) -> tuple[float, float]:
        return (self.speed_lo, self.speed_hi)


@dataclass(frozen=True)
class WaveFan:
    """Ordered wave structure of one transformed Riemann problem."""

    left: TransState
    middle: TransState
    right: TransState
    waves: tuple[Wave, ...]
    region: Region


def _states_coincide(a: TransState, b: TransState) -> bool:
    scale = 1.0 + abs(a.u) + abs(a.q)
    return abs(a.u - b.u) <= TOL_ZERO * scale and abs(a.q - b.q) <= TOL_ZERO * scale


def solve_middle(left: TransState, right: TransState, *,
                 tol_root: float = TOL_ROOT,
                 bracket: tuple[float, float] | None = None) -> TransState:
    """Intersect the two composite curves; returns the middle state.

    `bracket` optionally replaces the initial scan window (the result must
    not depend on it; it exists so uniqueness can be probed from perturbed
    windows).
    """
    if _states_coincide(left, right):
        return left
    f1 = forward_curve_1(left)
    b2 = backward_curve_2(right)

    def phi(u: float) -> float:
        return f1.q(u) - b2.q(u)

    lo0, hi0 = (min(left.u, right.u), max(left.u, right.u))
    if bracket is not None:
        lo0, hi0 = min(bracket), max(bracket)

    pair = None
    for k in range(41):
        w = 2.0 ** k
        us = np.linspace(lo0 - w, hi0 + w, 65)
        vals = [phi(float(u)) for u in us]
        for i in range(len(us) - 1):
            a, b = vals[i], vals[i + 1]
            if a == 0.0:
                pair = (float(us[i]), float(us[i]))
                break
            if (a > 0.0 and b <= 0.0) or (a < 0.0 and b >= 0.0):
                pair = (float(us[i]), float(us[i + 1]))
                break
        if pair is not None:
            break
    if pair is None:
        raise BracketFailure(
            f"no sign change of the curve difference between {left} and {right} "
            f"within the widest scan window"
        )

    if pair[0] == pair[1]:
        u_m = pair[0]
    else:
        u_m = float(brentq(phi, pair[0], pair[1], xtol=1e-14))

    # First-touch refinement: when the family-1 rarefaction has been
    # continued along the critical curve and the root landed on that flat
    # stretch (right state on the critical curve), the middle state is the
    # touch point itself.
    ustar = f1.crossing(u_m)
    if ustar is not None and u_m > ustar:
        if abs(phi(ustar)) <= 1e-9 * (1.0 + abs(f1.q(ustar))):
            u_m = ustar

    q_m = f1.q(u_m)
    residual = abs(q_m - b2.q(u_m))
    if residual > tol_root * (1.0 + abs(q_m)):
        raise BracketFailure(
            f"middle-state polish stalled: residual {residual:.3e} at u={u_m!r}"
        )
    q_m = max(q_m, 0.5 * u_m * u_m)
    return TransState(u_m, q_m)


def classify(left: TransState, right: TransState, middle: TransState, *,
             tie_tol: float = TIE_TOL) -> Region:
    """Assign the region from the middle-state position.

    I: two rarefactions, II: family-1 shock + family-2 rarefaction,
    III: rarefaction + shock, IV: two shocks; Degenerate when either wave
    has zero strength.
    """
    du1 = middle.u - left.u
    du2 = right.u - middle.u
    if abs(du1) <= tie_tol or abs(du2) <= tie_tol:
        return Region.DEGENERATE
    if du1 > 0.0:
        return Region.I if du2 > 0.0 else Region.III
    return Region.II if du2 > 0.0 else Region.IV


def lax_check(w: Wave, tol: float = TOL_LAX) -> bool:
    """Lax inequalities of a shock, including the transversality count."""
    if w.kind != "shock":
        raise PreconditionError("lax_check applies to shocks only")
    c = w.speed_lo
    l1l, l2l = (float(v) for v in trans_lambdas(w.left.u, w.left.q))
    l1r, l2r = (float(v) for v in trans_lambdas(w.right.u, w.right.q))
    if w.family == 1:
        return l1l >= c - tol and c >= l1r - tol and l2r >= c - tol
    return l2l >= c - tol and c >= l2r - tol and c >= l1l - tol


def _shock_wave(family: int, left: TransState, right: TransState) -> Wave:
    c = trans_shock_speed(left, right)
    w = Wave("shock", family, left, right, c, c)
    if not lax_check(w):
        raise OrderingViolation(
            f"family-{family} shock {left} -> {right} fails the Lax check at c={c!r}"
        )
    resid = abs(c * (left.q - right.q)
                - (trans_flux_g(left.u, left.q) - trans_flux_g(right.u, right.q)))
    scale = 1.0 + abs(trans_flux_g(left.u, left.q)) + abs(trans_flux_g(right.u, right.q))
    if resid > 1e-8 * scale:
        raise OrderingViolation(
            f"family-{family} shock violates the second jump condition by {resid:.3e}"
        )
    return w


def _rarefaction_wave(family: int, left: TransState, right: TransState,
                      rtol: float) -> Wave:
    curve = integrate_rarefaction(family, left, right.u, rtol=rtol)
    lam_l = float(family_lambda(family, left.u, left.q))
    lam_r = float(family_lambda(family, right.u, right.q))
    return Wave("rarefaction", family, left, right, lam_l, lam_r, curve)


def build_fan(left: TransState, right: TransState, *,
              tol_root: float = TOL_ROOT,
              tol_ode: float = TOL_ODE) -> WaveFan:
    """Solve, classify and assemble the ordered wave fan."""
    middle = solve_middle(left, right, tol_root=tol_root)
    region = classify(left, right, middle)
    waves: list[Wave] = []

    du1 = middle.u - left.u
    if abs(du1) > TIE_TOL:
        if du1 < 0.0:
            waves.append(_shock_wave(1, left, middle))
        else:
            waves.append(_rarefaction_wave(1, left, middle, tol_ode))

    du2 = right.u - middle.u
    if abs(du2) > TIE_TOL:
        mid = middle if waves else left
        if du2 < 0.0:
            waves.append(_shock_wave(2, mid, right))
        else:
            waves.append(_rarefaction_wave(2, mid, right, tol_ode))

    for a, b in zip(waves, waves[1:]):
        if a.speed_hi > b.speed_lo + TOL_LAX * (1.0 + abs(a.speed_hi)):
            raise OrderingViolation(
                f"wave speeds out of order: {a.speed_hi!r} > {b.speed_lo!r}"
            )
    return WaveFan(left, middle, right, tuple(waves), region)


def _invert_rarefaction(w: Wave, xi: float) -> float:
    a, b = w.left.u, w.right.u
    for _ in range(64):
        m = 0.5 * (a + b)
        if float(w.curve.lam_at(m)) < xi:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def sample_fan(fan: WaveFan, xi: float) -> TransState:
    """Evaluate the self-similar fan at ray slope xi = x/t.

    At a shock ray the right limit is returned.
    """
    state = fan.left
    for w in fan.waves:
        if xi < w.speed_lo:
            return state
        if w.kind == "rarefaction" and xi <= w.speed_hi:
            u = _invert_rarefaction(w, xi)
            q = max(float(w.curve.q_at(u)), 0.5 * u * u)
            return TransState(u, q)
        state = w.right
    return state


def sample_fan_many(fan: WaveFan, xi) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sample_fan: arrays (u, q) for an array of ray slopes."""
    xi = np.asarray(xi, dtype=float)
    u = np.empty_like(xi)
    q = np.empty_like(xi)

    edges: list[float] = []
    for w in fan.waves:
        edges.extend((w.speed_lo, w.speed_hi))
    idx = np.searchsorted(np.asarray(edges), xi, side="right")

    consts = [fan.left]
    for w in fan.waves:
        consts.append(w.right)
    for region in range(len(fan.waves) + 1):
        m = idx == 2 * region
        if m.any():
            u[m] = consts[region].u
            q[m] = consts[region].q
    for widx, w in enumerate(fan.waves):
        m = idx == 2 * widx + 1
        if not m.any():
            continue
        # inside this wave; shocks have zero-width slots, so this is a
        # rarefaction interior
        a = np.full(int(m.sum()), w.left.u)
        b = np.full(int(m.sum()), w.right.u)
        target = xi[m]
        for _ in range(64):
            mid = 0.5 * (a + b)
            lam = np.asarray(family_lambda(w.family, mid, w.curve.q_at(mid)))
            below = lam < target
            a = np.where(below, mid, a)
            b = np.where(below, b, mid)
        um = 0.5 * (a + b)
        u[m] = um
        q[m] = np.maximum(np.asarray(w.curve.q_at(um)), 0.5 * um * um)
    return u, q


def _state_dict(t: TransState) -> dict:
    return {"u": t.u, "q": t.q}


def fan_to_dict(fan: WaveFan) -> dict:
    """JSON-ready description of the fan."""
    return {
        "left": _state_dict(fan.left),
        "middle": _state_dict(fan.middle),
        "right": _state_dict(fan.right),
        "region": fan.region.value,
        "waves": [
            {
                "kind": w.kind,
                "family": w.family,
                "left": _state_dict(w.left),
                "right": _state_dict(w.right),
                "speed_lo": w.speed_lo,
                "speed_hi": w.speed_hi,
            }
            for w in fan.waves
        ],
    }
