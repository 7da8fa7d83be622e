"""Singular delta-type solutions of the original system.

Two constructors live here.  The generic one takes any 2x2 flux pair and a
single jump and hangs the Rankine-Hugoniot deficit of one equation on a
Dirac measure along the jump line, with strength growing linearly in time.
The model-specific one lifts Riemann data to the transformed plane, solves
for the admissible wave fan there, maps the fan back through
v = sign * sqrt(2q - u^2), and attaches one delta per transformed shock,
carrying that shock's deficit in the second equation.  Data whose v
components differ in sign additionally get a regular v-flip jump at
constant u = u_M between the two families; at its default speed u_M - 1 the
flip satisfies the jump condition of the second equation exactly and
carries nothing.

Region labels follow the transformed-plane classification: I two
rarefactions (no delta), II shock + rarefaction (one), III rarefaction +
shock (one), IV two shocks (two).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    TOL_ZERO,
    BrioState,
    FluxPair,
    RiemannData,
    TransState,
    brio_flux,
    brio_flux_pair,
    energy,
    family_lambda,
    lift,
    project,
)
from .errors import DegenerateJump, OrderingViolation, PreconditionError
from .riemann import Region, WaveFan, build_fan
from .wave_curves import IntegralCurve

# Tolerance for the asserted speed ordering around the v-flip jump.
TOL_ORDER = 1e-10


@dataclass(frozen=True)
class DeltaSingularity:
    """A Dirac measure on the line x = speed * t in one equation.

    Strength at time t is rate * t + constant; solutions built from Riemann
    data always have constant = 0, the nonzero-constant form exists for the
    non-uniqueness fixture.
    """

    speed: float
    rate: float
    constant: float
    component: str  # "u" or "v"

    def strength(self, t: float) -> float:
        return self.rate * t + self.constant


@dataclass(frozen=True)
class ConstantSegment:
    """Constant state on the ray wedge xi_lo <= x/t < xi_hi."""

    xi_lo: float
    xi_hi: float
    state: BrioState


@dataclass(frozen=True)
class RarefactionSegment:
    """Rarefaction fan wedge carrying the transformed curve and a v sign."""

    xi_lo: float
    xi_hi: float
    family: int
    curve: IntegralCurve = field(repr=False)
    v_sign: float
    left: BrioState
    right: BrioState


@dataclass(frozen=True)
class DeltaSolution:
    """Regular self-similar part plus finitely many delta singularities."""

    initial: RiemannData
    flux: FluxPair
    segments: tuple
    singular: tuple[DeltaSingularity, ...]
    fan: WaveFan | None = None
    options: dict = field(default_factory=dict)

    @property
    def region(self) -> Region | None:
        return self.fan.region if self.fan is not None else None


def rh_deficit_v(l: BrioState, r: BrioState, c: float) -> float:
    """Jump-condition deficit of the second equation, jumps right minus left.

    Vanishes exactly when the jump at speed c satisfies the second equation;
    otherwise it is the growth rate of the delta strength there.
    """
    gl = l.v * (l.u - 1.0)
    gr = r.v * (r.u - 1.0)
    return c * (r.v - l.v) - (gr - gl)


def rh_deficit_u(l: BrioState, r: BrioState, c: float) -> float:
    """Jump-condition deficit of the first equation, jumps right minus left."""
    return c * (r.u - l.u) - (energy(r) - energy(l))


def generic_delta_shock(flux: FluxPair, data: RiemannData, branch: str) -> DeltaSolution:
    """Single-jump delta-shock for an arbitrary flux pair.

    Branch "a" carries the jump at c = [f]/[u] and hangs the second
    equation's deficit on a delta in v; branch "b" carries it at
    c = [g]/[v] with the first equation's deficit on a delta in u.  The
    regular part is the translated initial step.
    """
    l, r = data.left, data.right
    fl, gl = flux.f(l.u, l.v), flux.g(l.u, l.v)
    fr, gr = flux.f(r.u, r.v), flux.g(r.u, r.v)
    if branch == "a":
        du = r.u - l.u
        if abs(du) <= TOL_ZERO:
            raise DegenerateJump("branch a needs a u-jump")
        c = (fr - fl) / du
        sing = DeltaSingularity(c, c * (r.v - l.v) - (gr - gl), 0.0, "v")
    elif branch == "b":
        dv = r.v - l.v
        if abs(dv) <= TOL_ZERO:
            raise DegenerateJump("branch b needs a v-jump")
        c = (gr - gl) / dv
        sing = DeltaSingularity(c, c * (r.u - l.u) - (fr - fl), 0.0, "u")
    else:
        raise ValueError(f"branch must be 'a' or 'b', got {branch!r}")
    segments = (
        ConstantSegment(-math.inf, c, l),
        ConstantSegment(c, math.inf, r),
    )
    return DeltaSolution(data, flux, segments, (sing,))


def _v_signs(data: RiemannData) -> tuple[float, float]:
    """Signs carried by the two sides; zero v adopts the other side's sign."""
    sl = math.copysign(1.0, data.left.v) if data.left.v != 0.0 else 0.0
    sr = math.copysign(1.0, data.right.v) if data.right.v != 0.0 else 0.0
    if sl == 0.0 and sr == 0.0:
        return 1.0, 1.0
    if sl == 0.0:
        return sr, sr
    if sr == 0.0:
        return sl, sl
    return sl, sr


def solve_brio(data: RiemannData, *, flip_speed="rh",
               tol_root: float | None = None,
               tol_ode: float | None = None) -> DeltaSolution:
    """Admissible delta-type solution of the Riemann problem.

    flip_speed chooses the speed of the v-flip jump in the sign-change
    case: "rh" for the jump-condition speed u_M - 1 (default; the flip then
    carries no deficit), "paper" for u_M, or a float for an explicit speed
    (verification hook).  A flip speed outside the gap between the two
    family waves raises OrderingViolation.
    """
    fan_kwargs = {}
    if tol_root is not None:
        fan_kwargs["tol_root"] = tol_root
    if tol_ode is not None:
        fan_kwargs["tol_ode"] = tol_ode
    fan = build_fan(lift(data.left), lift(data.right), **fan_kwargs)
    s_left, s_right = _v_signs(data)
    sign_change = data.left.v * data.right.v < 0.0

    if sign_change:
        if flip_speed == "rh":
            xi_flip = fan.middle.u - 1.0
        elif flip_speed == "paper":
            xi_flip = fan.middle.u
        elif isinstance(flip_speed, (int, float)) and not isinstance(flip_speed, bool):
            xi_flip = float(flip_speed)
        else:
            raise ValueError(f"flip_speed must be 'rh', 'paper' or a number, "
                             f"got {flip_speed!r}")

    wave1 = next((w for w in fan.waves if w.family == 1), None)
    wave2 = next((w for w in fan.waves if w.family == 2), None)

    events: list[tuple] = []
    if wave1 is not None:
        events.append(("wave", wave1))
    if sign_change:
        events.append(("flip", xi_flip))
    if wave2 is not None:
        events.append(("wave", wave2))

    segments: list = []
    singular: list[DeltaSingularity] = []
    cursor = -math.inf
    state_t = fan.left
    sign = s_left

    def emit_constant(hi: float) -> None:
        if hi > cursor:
            segments.append(ConstantSegment(cursor, hi, project(state_t, sign)))

    for ev in events:
        if ev[0] == "wave":
            w = ev[1]
            if w.speed_lo < cursor - TOL_ORDER * (1.0 + abs(w.speed_lo)):
                raise OrderingViolation(
                    f"wave at speed {w.speed_lo!r} overlaps the structure at {cursor!r}"
                )
            emit_constant(w.speed_lo)
            lb = project(w.left, sign)
            rb = project(w.right, sign)
            if w.kind == "shock":
                c = w.speed_lo
                singular.append(
                    DeltaSingularity(c, rh_deficit_v(lb, rb, c), 0.0, "v")
                )
                cursor = c
            else:
                segments.append(
                    RarefactionSegment(w.speed_lo, w.speed_hi, w.family,
                                       w.curve, sign, lb, rb)
                )
                cursor = w.speed_hi
            state_t = w.right
        else:
            xi = ev[1]
            if xi < cursor - TOL_ORDER * (1.0 + abs(xi)):
                raise OrderingViolation(
                    f"v-flip speed {xi!r} lies left of the structure at {cursor!r}"
                )
            emit_constant(xi)
            cursor = xi
            sign = -sign
    emit_constant(math.inf)

    return DeltaSolution(
        data, brio_flux_pair(), tuple(segments), tuple(singular), fan,
        {"flip_speed": flip_speed if sign_change else None},
    )


def nonuniqueness_example(beta: float, c1: float, c2: float) -> DeltaSolution:
    """Two constant-strength deltas of opposite sign over zero data.

    A valid weak solution for any beta and c1 != c2 (the two line
    contributions cancel for every test function); with c1 == c2 the pair
    telescopes away and the zero solution is returned.
    """
    zero = BrioState(0.0, 0.0)
    data = RiemannData(zero, zero)
    segments = (ConstantSegment(-math.inf, math.inf, zero),)
    if beta == 0.0 or c1 == c2:
        singular: tuple[DeltaSingularity, ...] = ()
    else:
        pair = (
            DeltaSingularity(c1, 0.0, beta, "v"),
            DeltaSingularity(c2, 0.0, -beta, "v"),
        )
        singular = tuple(sorted(pair, key=lambda s: s.speed))
    return DeltaSolution(data, brio_flux_pair(), segments, singular)


def cardinality(sol: DeltaSolution) -> int:
    """Number of singularities with non-vanishing strength."""
    return sum(
        1 for s in sol.singular
        if abs(s.rate) > TOL_ZERO or abs(s.constant) > TOL_ZERO
    )


def _segment_index(segments, xi: float) -> int:
    for i, seg in enumerate(segments):
        if seg.xi_lo <= xi < seg.xi_hi:
            return i
    return len(segments) - 1


def _rarefaction_state(seg: RarefactionSegment, xi: float) -> BrioState:
    a, b = seg.left.u, seg.right.u
    for _ in range(64):
        m = 0.5 * (a + b)
        if float(family_lambda(seg.family, m, seg.curve.q_at(m))) < xi:
            a = m
        else:
            b = m
    u = 0.5 * (a + b)
    q = max(float(seg.curve.q_at(u)), 0.5 * u * u)
    return BrioState(u, seg.v_sign * math.sqrt(max(2.0 * q - u * u, 0.0)))


def sample_brio(sol: DeltaSolution, x: float, t: float):
    """Regular state at (x, t) plus (position, strength) of every singularity."""
    if t <= 0.0:
        raise PreconditionError("sample time must be positive")
    xi = x / t
    seg = sol.segments[_segment_index(sol.segments, xi)]
    if isinstance(seg, ConstantSegment):
        state = seg.state
    else:
        state = _rarefaction_state(seg, xi)
    carriers = [(s.speed * t, s.strength(t)) for s in sol.singular]
    return state, carriers


def sample_brio_many(sol: DeltaSolution, xi) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized regular-part sampling: arrays (u, v) over ray slopes."""
    xi = np.asarray(xi, dtype=float)
    u = np.empty_like(xi)
    v = np.empty_like(xi)
    edges = np.asarray([seg.xi_hi for seg in sol.segments[:-1]])
    idx = np.searchsorted(edges, xi, side="right")
    for i, seg in enumerate(sol.segments):
        m = idx == i
        if not m.any():
            continue
        if isinstance(seg, ConstantSegment):
            u[m] = seg.state.u
            v[m] = seg.state.v
        else:
            a = np.full(int(m.sum()), seg.left.u)
            b = np.full(int(m.sum()), seg.right.u)
            target = xi[m]
            for _ in range(64):
                mid = 0.5 * (a + b)
                lam = np.asarray(family_lambda(seg.family, mid, seg.curve.q_at(mid)))
                below = lam < target
                a = np.where(below, mid, a)
                b = np.where(below, b, mid)
            um = 0.5 * (a + b)
            qm = np.maximum(np.asarray(seg.curve.q_at(um)), 0.5 * um * um)
            u[m] = um
            v[m] = seg.v_sign * np.sqrt(np.maximum(2.0 * qm - um * um, 0.0))
    return u, v


def _brio_state_dict(s: BrioState) -> dict:
    return {"u": s.u, "v": s.v}


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def solution_to_dict(sol: DeltaSolution) -> dict:
    """JSON-ready description of a delta solution."""
    regular = []
    for seg in sol.segments:
        entry = {
            "xi_lo": _finite_or_none(seg.xi_lo),
            "xi_hi": _finite_or_none(seg.xi_hi),
        }
        if isinstance(seg, ConstantSegment):
            entry["kind"] = "constant"
            entry["state"] = _brio_state_dict(seg.state)
        else:
            entry["kind"] = "rarefaction"
            entry["family"] = seg.family
            entry["v_sign"] = seg.v_sign
            entry["left"] = _brio_state_dict(seg.left)
            entry["right"] = _brio_state_dict(seg.right)
        regular.append(entry)
    return {
        "initial": {
            "left": _brio_state_dict(sol.initial.left),
            "right": _brio_state_dict(sol.initial.right),
        },
        "regular": regular,
        "singular": [
            {"speed": s.speed, "rate": s.rate, "constant": s.constant,
             "component": s.component}
            for s in sol.singular
        ],
        "options": {
            "flip_speed": sol.options.get("flip_speed"),
        },
    }
