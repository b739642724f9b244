"""Event-driven integration of the perturbed system and its return map.

Each zone's field is integrated on its own segment with DOP853. The segment
ends at the first crossing of a bounding switching line taken in the outward
direction only, so a segment that starts on a line never re-triggers there.
At every crossing the next zone is picked from the sign of x' of the fields
on both sides; disagreeing signs mean sliding, |x'| below ``TANGENT_TOL``
means a tangency.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .analysis import ZeroSet
from .errors import (
    CycleNotFound,
    DomainError,
    OrbitEscaped,
    SlidingDetected,
    StepFailure,
)
from .model import TANGENT_TOL, Side, ThreeZoneSystem
from .unperturbed import annulus_interval

RTOL = 1e-12
ATOL = 1e-13
LINE_TOL = 1e-12
EPS_MAX = 1e-2
MAP_TOL = 1e-10
T_REVOLUTION_MAX = 1e3


class Status(enum.Enum):
    COMPLETED = "completed"        # hit the requested number of crossings
    TIME_LIMIT = "time-limit"
    TANGENCY = "tangency"


@dataclass(frozen=True)
class Crossing:
    line: int            # +1 for x = 1, -1 for x = -1
    direction: int       # sign of x' through the line
    time: float
    point: tuple[float, float]
    source: Side
    target: Side

    def as_dict(self) -> dict:
        return {"line": self.line, "direction": self.direction, "time": self.time,
                "x": self.point[0], "y": self.point[1],
                "from": self.source.value, "to": self.target.value}


@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    zones: list[Side]
    events: list[Crossing]
    status: Status
    steps: int

    @property
    def end(self) -> tuple[float, float]:
        return float(self.x[-1]), float(self.y[-1])

    def rows(self):
        return [(float(t), float(x), float(y), z.value)
                for t, x, y, z in zip(self.t, self.x, self.y, self.zones)]


def _xdot(sys: ThreeZoneSystem, side: Side, x: float, y: float, eps: float) -> float:
    return sys.field(side, x, y, eps)[0]


def _zone_after(sys: ThreeZoneSystem, x: float, y: float, line: int, eps: float):
    """Zone entered from a point on the line, or a tangency marker."""
    outer = Side.RIGHT if line > 0 else Side.LEFT
    vo = _xdot(sys, outer, x, y, eps)
    vc = _xdot(sys, Side.CENTER, x, y, eps)
    if abs(vo) < TANGENT_TOL or abs(vc) < TANGENT_TOL:
        return None
    if vo * vc < 0:
        raise SlidingDetected(f"fields disagree across x = {line} at y = {y:.12g} "
                              f"(x' = {vc:.3g} inside, {vo:.3g} outside)")
    # moving right: enter the zone to the right of the line
    if vo > 0:
        return outer if line > 0 else Side.CENTER
    return Side.CENTER if line > 0 else outer


def _initial_zone(sys: ThreeZoneSystem, x: float, y: float, eps: float):
    if abs(x - 1.0) <= LINE_TOL:
        return _zone_after(sys, 1.0, y, +1, eps), 1.0
    if abs(x + 1.0) <= LINE_TOL:
        return _zone_after(sys, -1.0, y, -1, eps), -1.0
    return ThreeZoneSystem.side_of(x), x


def _events_for(side: Side):
    def right_exit(t, u):       # leave R through x = 1 moving left
        return u[0] - 1.0
    right_exit.terminal, right_exit.direction = True, -1

    def left_exit(t, u):        # leave L through x = -1 moving right
        return u[0] + 1.0
    left_exit.terminal, left_exit.direction = True, 1

    def center_right(t, u):
        return u[0] - 1.0
    center_right.terminal, center_right.direction = True, 1

    def center_left(t, u):
        return u[0] + 1.0
    center_left.terminal, center_left.direction = True, -1

    if side is Side.RIGHT:
        return [right_exit], [1]
    if side is Side.LEFT:
        return [left_exit], [-1]
    return [center_right, center_left], [1, -1]


def _max_step(sys: ThreeZoneSystem, side: Side, u, eps: float) -> float:
    """Step cap so an exit window near the entry line cannot be stepped over.

    Annulus arcs leave near the mirror image (y -> -y) of their entry point
    and spend roughly 2|y| / |y'| beyond the exit line there, so small-h
    orbits need correspondingly small steps.
    """
    vy = abs(sys.field(side, u[0], u[1], eps)[1])
    if vy == 0.0:
        return np.inf
    return max(1e-4, 0.5 * abs(u[1]) / vy)


def integrate_crossing(sys: ThreeZoneSystem, start, t_max: float, *,
                       epsilon: float | None = None, max_crossings: int | None = None,
                       rtol: float = RTOL, atol: float = ATOL) -> Trajectory:
    """Integrate from ``start`` until ``t_max``, ``max_crossings`` or a tangency."""
    eps = sys.epsilon if epsilon is None else epsilon
    x0, y0 = float(start[0]), float(start[1])
    side, x0 = _initial_zone(sys, x0, y0, eps)
    ts, xs, ys, zones = [np.array([0.0])], [np.array([x0])], [np.array([y0])], [Side.CENTER]
    events: list[Crossing] = []
    steps = 0
    if side is None:
        return Trajectory(np.array([0.0]), np.array([x0]), np.array([y0]),
                          [ThreeZoneSystem.side_of(x0)], events, Status.TANGENCY, 0)
    zones[0] = side
    t, u = 0.0, np.array([x0, y0])
    status = Status.TIME_LIMIT
    while t < t_max:
        evs, lines = _events_for(side)
        z = side

        def rhs(_t, v):
            return sys.field(z, v[0], v[1], eps)

        sol = integrate.solve_ivp(rhs, (t, t_max), u, method="DOP853", rtol=rtol, atol=atol,
                                  events=evs, max_step=_max_step(sys, side, u, eps))
        if sol.status == -1:
            raise StepFailure(sol.message)
        steps += sol.t.size - 1
        ts.append(sol.t[1:])
        xs.append(sol.y[0, 1:])
        ys.append(sol.y[1, 1:])
        zones.extend([side] * (sol.t.size - 1))
        if sol.status == 0:
            break
        k = next(i for i, te in enumerate(sol.t_events) if te.size)
        line = lines[k]
        t = float(sol.t_events[k][0])
        y = float(sol.y_events[k][0][1])
        u = np.array([float(line), y])
        ts.append(np.array([t]))
        xs.append(np.array([float(line)]))
        ys.append(np.array([y]))
        zones.append(side)
        nxt = _zone_after(sys, float(line), y, line, eps)
        if nxt is None:
            status = Status.TANGENCY
            break
        direction = 1 if sys.field(side, line, y, eps)[0] > 0 else -1
        events.append(Crossing(line, direction, t, (float(line), y), side, nxt))
        side = nxt
        if max_crossings is not None and len(events) >= max_crossings:
            status = Status.COMPLETED
            break
    return Trajectory(np.concatenate(ts), np.concatenate(xs), np.concatenate(ys),
                      zones, events, status, steps)


# --- return map ---------------------------------------------------------------

@dataclass(frozen=True)
class PoincareSample:
    h: float
    epsilon: float
    d_return: float
    h_energy_diff: float
    steps: int
    events: tuple[Crossing, ...]

    @property
    def period(self) -> float:
        return self.events[-1].time


_EXPECTED = ((1, -1), (-1, -1), (-1, 1), (1, 1))   # (line, direction) per revolution


def poincare_sample(sys: ThreeZoneSystem, h: float, epsilon: float | None = None,
                    eps_max: float = EPS_MAX) -> PoincareSample:
    """One revolution from A = (1, h) back to the section x = 1, y > 0."""
    eps = sys.epsilon if epsilon is None else float(epsilon)
    if not 0.0 <= eps <= eps_max:
        raise DomainError(f"epsilon = {eps!r} outside [0, {eps_max}]")
    J = annulus_interval(sys)
    if not J.contains(h):
        raise DomainError(f"h = {h!r} outside J = {J}")
    traj = integrate_crossing(sys, (1.0, h), T_REVOLUTION_MAX, epsilon=eps, max_crossings=4)
    got = tuple((c.line, c.direction) for c in traj.events)
    if traj.status is not Status.COMPLETED or got != _EXPECTED:
        raise OrbitEscaped(f"orbit from (1, {h:.12g}) did not circle the annulus "
                           f"(status {traj.status.value}, crossings {got})")
    d = traj.events[-1].point[1]
    bR = sys.right.b
    return PoincareSample(float(h), eps, d - h, 0.5 * bR * (d * d - h * h), traj.steps,
                          tuple(traj.events))


# --- limit cycles ---------------------------------------------------------------

@dataclass(frozen=True)
class CycleCertificate:
    h_star: float
    epsilon: float
    fixed_point_residual: float
    multiplier_estimate: float
    predicted_h: float

    def as_dict(self) -> dict:
        return {"h_star": self.h_star, "epsilon": self.epsilon,
                "fixed_point_residual": self.fixed_point_residual,
                "multiplier_estimate": self.multiplier_estimate,
                "predicted_h": self.predicted_h}


@dataclass
class CycleSearch:
    certificates: list[CycleCertificate] = field(default_factory=list)
    failures: list[tuple[float, str]] = field(default_factory=list)

    def __len__(self):
        return len(self.certificates)

    def __iter__(self):
        return iter(self.certificates)

    def __getitem__(self, i):
        return self.certificates[i]

    def as_dict(self) -> dict:
        return {"certificates": [c.as_dict() for c in self.certificates],
                "failures": [{"predicted_h": h, "reason": r} for h, r in self.failures]}


def _half_width(h: float, zeros: list[float], lo: float, hi: float, span: float) -> float:
    others = [abs(h - z) for z in zeros if z != h]
    limit = min([0.5 * d for d in others] + [0.5 * (h - lo), 0.5 * (hi - h)])
    return min(0.05 * span, limit), limit


def locate_limit_cycles(sys: ThreeZoneSystem, epsilon: float, zero_set: ZeroSet,
                        widen: int = 4, map_tol: float = MAP_TOL) -> CycleSearch:
    """Track each simple Melnikov zero to a fixed point of the return map.

    The search bracket starts at 5% of the scanned interval (never wider than
    half the gap to a neighbouring zero or to the interval edge) and doubles up
    to ``widen`` times until d_return changes sign.
    """
    if not 0.0 < epsilon <= EPS_MAX:
        raise DomainError(f"epsilon = {epsilon!r} outside (0, {EPS_MAX}]")
    sys = sys.with_epsilon(epsilon)
    lo, hi = zero_set.scan
    span = hi - lo
    zeros = [z.h for z in zero_set.zeros]
    result = CycleSearch()

    def d(h):
        return poincare_sample(sys, h, epsilon).d_return

    for z in zero_set.zeros:
        if not z.simple:
            result.failures.append((z.h, "Melnikov zero is not simple"))
            continue
        delta, limit = _half_width(z.h, zeros, lo, hi, span)
        try:
            bracket = None
            for _ in range(widen + 1):
                a, b = z.h - delta, z.h + delta
                da, db = d(a), d(b)
                if da * db < 0:
                    bracket = (a, b, da, db)
                    break
                if delta >= limit:
                    break
                delta = min(2 * delta, limit)
            if bracket is None:
                raise CycleNotFound(f"no sign change of d_return near h = {z.h:.12g}")
            h_star = optimize.brentq(d, bracket[0], bracket[1], xtol=map_tol)
            res = abs(d(h_star))
            step = min(1e-5, 0.25 * delta)
            slope = (d(h_star + step) - d(h_star - step)) / (2 * step)
            result.certificates.append(
                CycleCertificate(h_star, epsilon, res, 1.0 + slope, z.h))
        except (CycleNotFound, OrbitEscaped, SlidingDetected) as exc:
            result.failures.append((z.h, str(exc)))
    return result


def revolution_time(sys: ThreeZoneSystem, h: float) -> float:
    return poincare_sample(sys, h, 0.0).period


def trajectory_rows(sys: ThreeZoneSystem, h: float, epsilon: float, revolutions: int = 1):
    traj = integrate_crossing(sys, (1.0, h), 1e3 * revolutions, epsilon=epsilon,
                              max_crossings=4 * revolutions)
    return traj.rows()


__all__ = [
    "Crossing", "CycleCertificate", "CycleSearch", "PoincareSample", "Status", "Trajectory",
    "integrate_crossing", "locate_limit_cycles", "poincare_sample", "trajectory_rows",
    "revolution_time", "EPS_MAX",
]
