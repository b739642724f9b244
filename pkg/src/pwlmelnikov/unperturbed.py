"""Geometry of the unperturbed normal-form system.

Every crossing periodic orbit of the annulus passes through
A = (1, h), A1 = (1, -h), A2 = (-1, -h), A3 = (-1, h). The arcs between those
points are pieces of linear flows, so they have exact parametrizations and
flight times (log-type in saddle zones, arccos-type in center zones).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolation, NotASaddle, OutOfAnnulus
from .model import (
    EquilibriumType,
    Placement,
    Side,
    ThreeZoneSystem,
    ZoneHamiltonian,
    classify_zone,
)

HETEROCLINIC_TOL = 1e-10
ENERGY_TOL = 1e-12


class BoundaryKind(enum.Enum):
    HOMOCLINIC_LOOP = "homoclinic"
    HETEROCLINIC_ORBIT = "heteroclinic"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class AnnulusInterval:
    lower: float
    upper: float
    boundary_kind: BoundaryKind
    tangency_count_at_zero: int

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.upper)

    def contains(self, h: float) -> bool:
        return self.lower < h < self.upper

    def __str__(self):
        hi = "inf" if not self.bounded else f"{self.upper:.12g}"
        return f"({self.lower:.12g}, {hi})"


@dataclass(frozen=True)
class CrossingQuad:
    A: tuple[float, float]
    A1: tuple[float, float]
    A2: tuple[float, float]
    A3: tuple[float, float]
    h: float


@dataclass(frozen=True)
class SeparatrixPoints:
    PLu: tuple[float, float] | None
    PLs: tuple[float, float] | None
    PRu: tuple[float, float] | None
    PRs: tuple[float, float] | None


class ArcZone(enum.Enum):
    R = "R"
    C_LOWER = "C_lower"
    L = "L"
    C_UPPER = "C_upper"


def linear_flow(z: ZoneHamiltonian, start, t):
    """Exact solution of the zone's linear field from ``start`` at times ``t``.

    Uses K^2 = (a^2 + b c) I, so exp(K t) = cosh(w t) I + sinh(w t)/w K for
    saddles and cos(w t) I + sin(w t)/w K for centers.
    """
    t = np.asarray(t, dtype=float)
    ex, ey = z.equilibrium()
    dx, dy = start[0] - ex, start[1] - ey
    w = z.omega
    if z.discriminant > 0:
        ch, sh = np.cosh(w * t), np.sinh(w * t) / w
    else:
        ch, sh = np.cos(w * t), np.sin(w * t) / w
    K = z.matrix
    x = ex + ch * dx + sh * (K[0, 0] * dx + K[0, 1] * dy)
    y = ey + ch * dy + sh * (K[1, 0] * dx + K[1, 1] * dy)
    return x, y


@dataclass(frozen=True)
class OrbitArc:
    zone: ArcZone
    hamiltonian: ZoneHamiltonian
    start: tuple[float, float]
    end: tuple[float, float]
    flight_time: float

    def __call__(self, t):
        return linear_flow(self.hamiltonian, self.start, t)

    def velocity(self, t):
        x, y = self(t)
        return self.hamiltonian.field(x, y)


def _outer(side: Side) -> str:
    return "R" if side is Side.RIGHT else "L"


def separatrix_ordinate(z: ZoneHamiltonian, side: Side) -> float:
    """Ordinate of the stable (right) or unstable (left) separatrix hit on x = +-1."""
    if z.discriminant <= 0:
        raise NotASaddle(f"{side.value} zone is not a saddle")
    w = math.sqrt(z.discriminant)
    if side is Side.RIGHT:
        return (z.a ** 2 - z.b * z.beta - w * w) / (z.b * w)
    if side is Side.LEFT:
        return (z.a ** 2 + z.b * z.beta - w * w) / (z.b * w)
    raise ValueError("separatrices are defined for the outer zones only")


def separatrix_ordinates(sys: ThreeZoneSystem) -> tuple[float | None, float | None]:
    def maybe(side):
        try:
            return separatrix_ordinate(sys.zone(side), side)
        except NotASaddle:
            return None
    return maybe(Side.LEFT), maybe(Side.RIGHT)


def separatrix_points(sys: ThreeZoneSystem) -> SeparatrixPoints:
    tau_l, tau_r = separatrix_ordinates(sys)
    if tau_l is None and tau_r is None:
        raise NotASaddle("neither outer zone is a saddle")
    pl = (None, None) if tau_l is None else ((-1.0, tau_l), (-1.0, -tau_l))
    pr = (None, None) if tau_r is None else ((1.0, -tau_r), (1.0, tau_r))
    return SeparatrixPoints(PLu=pl[0], PLs=pl[1], PRu=pr[0], PRs=pr[1])


def annulus_interval(sys: ThreeZoneSystem) -> AnnulusInterval:
    kinds = {side: classify_zone(sys.zone(side), side) for side in (Side.LEFT, Side.RIGHT)}
    real_centers = sum(1 for k in kinds.values()
                       if k.kind is EquilibriumType.CENTER and k.placement is Placement.REAL)
    taus = {}
    for side, k in kinds.items():
        if k.kind is EquilibriumType.SADDLE:
            tau = separatrix_ordinate(sys.zone(side), side)
            if tau <= 0:
                raise HypothesisViolation(
                    f"{side.value} saddle separatrix ordinate {tau:.6g} <= 0: no crossing annulus",
                    "H3")
            taus[side] = tau
    if not taus:
        return AnnulusInterval(0.0, math.inf, BoundaryKind.UNBOUNDED, 1 + real_centers)
    tau = min(taus.values())
    kind = BoundaryKind.HOMOCLINIC_LOOP
    if len(taus) == 2 and abs(taus[Side.LEFT] - taus[Side.RIGHT]) <= HETEROCLINIC_TOL:
        kind = BoundaryKind.HETEROCLINIC_ORBIT
    return AnnulusInterval(0.0, tau, kind, 1 + real_centers)


def _require_in_annulus(sys: ThreeZoneSystem, h: float) -> AnnulusInterval:
    J = annulus_interval(sys)
    if not J.contains(h):
        raise OutOfAnnulus(f"h = {h!r} is outside J = {J}")
    return J


def crossing_quad(sys: ThreeZoneSystem, h: float) -> CrossingQuad:
    _require_in_annulus(sys, h)
    quad = CrossingQuad((1.0, h), (1.0, -h), (-1.0, -h), (-1.0, h), h)
    pairs = ((sys.right, quad.A, quad.A1), (sys.center, quad.A1, quad.A2),
             (sys.left, quad.A2, quad.A3), (sys.center, quad.A3, quad.A))
    for z, p, q in pairs:
        e1, e2 = z(*p), z(*q)
        if abs(e1 - e2) > ENERGY_TOL * max(1.0, abs(e1)):
            raise HypothesisViolation("crossing energies do not match; is the system in normal form?",
                                      "H3")
    return quad


def center_flight_time(h: float) -> float:
    return math.acos((h * h - 1.0) / (h * h + 1.0))


def outer_flight_time(z: ZoneHamiltonian, side: Side, h: float) -> float:
    """Time from (+-1, +-h) back to the same line inside an outer zone."""
    d = z.discriminant
    w = math.sqrt(abs(d))
    a2, bb = z.a * z.a, z.b * z.beta
    if d > 0:
        if side is Side.RIGHT:
            arg = 1.0 - 2 * z.b * w * h / (-a2 + bb + z.b * w * h + w * w)
        else:
            arg = 1.0 + 2 * z.b * w * h / (a2 + bb - z.b * w * h - w * w)
        if not arg > 0:
            raise OutOfAnnulus(f"h = {h!r} beyond the separatrix of the {side.value} saddle")
        return math.log(arg) / w
    angle = center_zone_angle(z, side, h)
    return angle / w


def center_zone_angle(z: ZoneHamiltonian, side: Side, h: float) -> float:
    """Rotation angle swept by the outer center-zone arc.

    The principal arccos value is the short way round; when the center is real
    the arc encloses it and sweeps 2*pi minus that.
    """
    w2 = -z.discriminant
    sgn = -1.0 if side is Side.RIGHT else 1.0
    m = z.a * z.a + sgn * z.b * z.beta
    # equals arccos(1 - 2 b^2 w^2 h^2 / ((m + w^2)^2 + b^2 w^2 h^2)) without
    # the cancellation near 1
    theta = 2.0 * math.atan2(z.b * math.sqrt(w2) * h, abs(m + w2))
    if classify_zone(z, side).placement is Placement.REAL:
        theta = 2 * math.pi - theta
    return theta


def orbit_arcs(sys: ThreeZoneSystem, h: float) -> tuple[OrbitArc, OrbitArc, OrbitArc, OrbitArc]:
    """The four arcs A->A1 (right), A1->A2 (center, y<0), A2->A3 (left), A3->A (center, y>0)."""
    q = crossing_quad(sys, h)
    tc = center_flight_time(h)
    if not (0.0 < tc < math.pi):
        raise AssertionError("central flight time must lie in (0, pi)")
    return (
        OrbitArc(ArcZone.R, sys.right, q.A, q.A1, outer_flight_time(sys.right, Side.RIGHT, h)),
        OrbitArc(ArcZone.C_LOWER, sys.center, q.A1, q.A2, tc),
        OrbitArc(ArcZone.L, sys.left, q.A2, q.A3, outer_flight_time(sys.left, Side.LEFT, h)),
        OrbitArc(ArcZone.C_UPPER, sys.center, q.A3, q.A, tc),
    )


def period(sys: ThreeZoneSystem, h: float) -> float:
    return sum(arc.flight_time for arc in orbit_arcs(sys, h))


def arc_orientation_ok(arc: OrbitArc, samples: int = 33) -> bool:
    t = np.linspace(0.0, arc.flight_time, samples)[1:-1]
    x, y = arc(t)
    if arc.zone is ArcZone.R:
        return bool(np.all(x > 1.0))
    if arc.zone is ArcZone.L:
        return bool(np.all(x < -1.0))
    if arc.zone is ArcZone.C_LOWER:
        return bool(np.all(y < 0.0) and np.all(np.abs(x) < 1.0))
    return bool(np.all(y > 0.0) and np.all(np.abs(x) < 1.0))


def probe_annulus(sys: ThreeZoneSystem, h: float | None = None) -> bool:
    """Check that the orbit through (1, h) visits the three zones clockwise and closes."""
    J = annulus_interval(sys)
    if h is None:
        h = 0.5 * J.upper if J.bounded else 0.5
    for arc in orbit_arcs(sys, h):
        if not (math.isfinite(arc.flight_time) and arc.flight_time > 0):
            return False
        end = arc(arc.flight_time)
        if math.hypot(end[0] - arc.end[0], end[1] - arc.end[1]) > 1e-8:
            return False
        if not arc_orientation_ok(arc):
            return False
    return True


def sample_arcs(sys: ThreeZoneSystem, h: float, samples: int = 50):
    """Rows (zone, t, x, y) along the closed orbit through (1, h)."""
    rows = []
    for arc in orbit_arcs(sys, h):
        t = np.linspace(0.0, arc.flight_time, samples)
        x, y = arc(t)
        rows.extend((arc.zone.value, float(ti), float(xi), float(yi)) for ti, xi, yi in zip(t, x, y))
    return rows
