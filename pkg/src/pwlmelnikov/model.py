"""Three-zone piecewise-linear Hamiltonian systems.

Zone ``i`` carries

    H_i(x, y) = b/2 y^2 - c/2 x^2 + a x y + alpha y - beta x

and the perturbation ``f_i = p x + q y + r``, ``g_i = s x + u y + v``, so the
full field is ``(H_y + eps f, -H_x + eps g)``. The switching lines are fixed at
x = -1 and x = +1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateZone, HypothesisViolation

DEGENERACY_TOL = 1e-12
BOUNDARY_TOL = 1e-12
TANGENT_TOL = 1e-10


class Side(enum.Enum):
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"


class EquilibriumType(enum.Enum):
    CENTER = "C"
    SADDLE = "S"


class Placement(enum.Enum):
    REAL = "real"
    VIRTUAL = "virtual"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class ZoneHamiltonian:
    a: float
    b: float
    c: float
    alpha: float = 0.0
    beta: float = 0.0

    @property
    def discriminant(self) -> float:
        return self.a * self.a + self.b * self.c

    @property
    def omega(self) -> float:
        """sqrt(|a^2 + b c|): the saddle rate or the center frequency."""
        return math.sqrt(abs(self.discriminant))

    def __call__(self, x, y):
        return (0.5 * self.b * y * y - 0.5 * self.c * x * x + self.a * x * y
                + self.alpha * y - self.beta * x)

    def field(self, x, y):
        """Hamiltonian vector field (H_y, -H_x)."""
        return (self.b * y + self.a * x + self.alpha,
                self.c * x - self.a * y + self.beta)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, -self.a]], dtype=float)

    def equilibrium(self) -> tuple[float, float]:
        d = self.discriminant
        if abs(d) < DEGENERACY_TOL:
            raise DegenerateZone(f"a^2 + b c = {d:g} is degenerate")
        # [[a, b], [c, -a]] (x, y) = (-alpha, -beta); determinant is -d
        x = (self.a * self.alpha + self.b * self.beta) / (-d)
        y = (self.c * self.alpha - self.a * self.beta) / (-d)
        return (x, y)

    def scaled(self, lam: float) -> "ZoneHamiltonian":
        return ZoneHamiltonian(lam * self.a, lam * self.b, lam * self.c,
                               lam * self.alpha, lam * self.beta)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c, self.alpha, self.beta)


@dataclass(frozen=True)
class ZonePerturbation:
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0
    s: float = 0.0
    u: float = 0.0
    v: float = 0.0

    def f(self, x, y):
        return self.p * x + self.q * y + self.r

    def g(self, x, y):
        return self.s * x + self.u * y + self.v

    def scaled(self, lam: float) -> "ZonePerturbation":
        return ZonePerturbation(*(lam * c for c in self.as_tuple()))

    def as_tuple(self) -> tuple[float, ...]:
        return (self.p, self.q, self.r, self.s, self.u, self.v)

    def __post_init__(self):
        if not all(math.isfinite(c) for c in self.as_tuple()):
            raise ValueError("perturbation coefficients must be finite")


ZERO_PERTURBATION = ZonePerturbation()


@dataclass(frozen=True)
class ThreeZoneSystem:
    left: ZoneHamiltonian
    center: ZoneHamiltonian
    right: ZoneHamiltonian
    left_pert: ZonePerturbation = ZERO_PERTURBATION
    center_pert: ZonePerturbation = ZERO_PERTURBATION
    right_pert: ZonePerturbation = ZERO_PERTURBATION
    epsilon: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")

    def zone(self, side: Side) -> ZoneHamiltonian:
        return getattr(self, side.value)

    def perturbation(self, side: Side) -> ZonePerturbation:
        return getattr(self, side.value + "_pert")

    @staticmethod
    def side_of(x: float) -> Side:
        if x > 1.0:
            return Side.RIGHT
        if x < -1.0:
            return Side.LEFT
        return Side.CENTER

    def field(self, side: Side, x, y, epsilon: float | None = None):
        eps = self.epsilon if epsilon is None else epsilon
        z, pt = self.zone(side), self.perturbation(side)
        fx, fy = z.field(x, y)
        return (fx + eps * pt.f(x, y), fy + eps * pt.g(x, y))

    def with_perturbations(self, left: ZonePerturbation, center: ZonePerturbation,
                           right: ZonePerturbation) -> "ThreeZoneSystem":
        return replace(self, left_pert=left, center_pert=center, right_pert=right)

    def with_epsilon(self, epsilon: float) -> "ThreeZoneSystem":
        return replace(self, epsilon=epsilon)

    def unperturbed(self) -> "ThreeZoneSystem":
        return self.with_perturbations(ZERO_PERTURBATION, ZERO_PERTURBATION,
                                       ZERO_PERTURBATION).with_epsilon(0.0)

    def perturbation_vector(self) -> np.ndarray:
        """Perturbation coefficients as an 18-vector ordered left, center, right."""
        return np.array(self.left_pert.as_tuple() + self.center_pert.as_tuple()
                        + self.right_pert.as_tuple(), dtype=float)

    def with_perturbation_vector(self, vec) -> "ThreeZoneSystem":
        vec = [float(c) for c in vec]
        if len(vec) != 18:
            raise ValueError("expected 18 perturbation coefficients")
        return self.with_perturbations(ZonePerturbation(*vec[0:6]),
                                       ZonePerturbation(*vec[6:12]),
                                       ZonePerturbation(*vec[12:18]))


def normal_form_system(left: tuple[float, float, float, float],
                       right: tuple[float, float, float, float],
                       **perturbations) -> ThreeZoneSystem:
    """Build a normal-form system from ``(a, b, c, beta)`` of the outer zones.

    The center is x^2/2 + y^2/2 and the linear y-coefficients are tied to the
    outer ``a`` (alpha_L = a_L, alpha_R = -a_R), which is the shape that makes
    the tangent points of all three fields coincide at (+-1, 0).
    """
    aL, bL, cL, betaL = left
    aR, bR, cR, betaR = right
    return ThreeZoneSystem(
        left=ZoneHamiltonian(aL, bL, cL, aL, betaL),
        center=ZoneHamiltonian(0.0, 1.0, -1.0, 0.0, 0.0),
        right=ZoneHamiltonian(aR, bR, cR, -aR, betaR),
        **perturbations,
    )


@dataclass(frozen=True)
class ZoneKind:
    kind: EquilibriumType
    placement: Placement
    equilibrium: tuple[float, float]

    @property
    def letter(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class SystemClass:
    label: str
    reflected: bool = False
    kinds: tuple[ZoneKind, ZoneKind, ZoneKind] | None = field(default=None, compare=False)

    def __str__(self):
        return self.label


def classify_zone(z: ZoneHamiltonian, side: Side) -> ZoneKind:
    d = z.discriminant
    if abs(d) < DEGENERACY_TOL:
        raise DegenerateZone(f"{side.value} zone: a^2 + b c = {d:g}")
    kind = EquilibriumType.CENTER if d < 0 else EquilibriumType.SADDLE
    ex, ey = z.equilibrium()
    if side is Side.RIGHT:
        gap = ex - 1.0
    elif side is Side.LEFT:
        gap = -1.0 - ex
    else:
        gap = 1.0 - abs(ex)
    if abs(gap) <= BOUNDARY_TOL:
        placement = Placement.BOUNDARY
    elif gap > 0:
        placement = Placement.REAL
    else:
        placement = Placement.VIRTUAL
    return ZoneKind(kind, placement, (ex, ey))


def reflect(sys: ThreeZoneSystem) -> ThreeZoneSystem:
    """Image under (x, y) -> (-x, -y), with the left and right zones exchanged.

    The map keeps the lines x = +-1 and the clockwise orientation. Hamiltonians
    keep their quadratic part and flip alpha, beta; perturbations flip r, v.
    """
    def hz(z):
        return ZoneHamiltonian(z.a, z.b, z.c, -z.alpha, -z.beta)

    def pz(w):
        return ZonePerturbation(w.p, w.q, -w.r, w.s, w.u, -w.v)

    return ThreeZoneSystem(
        left=hz(sys.right), center=hz(sys.center), right=hz(sys.left),
        left_pert=pz(sys.right_pert), center_pert=pz(sys.center_pert),
        right_pert=pz(sys.left_pert), epsilon=sys.epsilon,
    )


def _zone_kinds(sys: ThreeZoneSystem) -> tuple[ZoneKind, ZoneKind, ZoneKind]:
    return (classify_zone(sys.left, Side.LEFT),
            classify_zone(sys.center, Side.CENTER),
            classify_zone(sys.right, Side.RIGHT))


def classify_system(sys: ThreeZoneSystem) -> SystemClass:
    """Return the system label, reflecting so the binding saddle sits on the right.

    ``reflected`` is set when the natural reading is SCC, or SCS whose left
    separatrix ordinate is the smaller one.
    """
    center = classify_zone(sys.center, Side.CENTER)
    if center.kind is not EquilibriumType.CENTER or center.placement is not Placement.REAL:
        raise HypothesisViolation("central subsystem is not a real center", "H1")
    kinds = _zone_kinds(sys)
    letters = "".join(k.letter for k in kinds)
    if letters == "SCC":
        return SystemClass("CCS", True, kinds)
    if letters == "SCS":
        from .unperturbed import separatrix_ordinates
        tau_left, tau_right = separatrix_ordinates(_normalized(sys))
        return SystemClass("SCS", tau_left < tau_right, kinds)
    return SystemClass(letters, False, kinds)


def _normalized(sys: ThreeZoneSystem) -> ThreeZoneSystem:
    from .normal_form import to_normal_form, verify_normal_form
    if verify_normal_form(sys):
        return sys
    return to_normal_form(sys).system


def tangent_points(sys: ThreeZoneSystem) -> tuple[tuple[float, float], ...]:
    """Tangent points P1..P4 of the center/right/center/left fields with x = +-1.

    The center formulas assume the central equilibrium has been moved to the
    origin (alpha_C = beta_C = 0).
    """
    L, C, R = sys.left, sys.center, sys.right
    for side, z in ((Side.LEFT, L), (Side.CENTER, C), (Side.RIGHT, R)):
        if z.b == 0:
            raise DegenerateZone(f"{side.value} zone has b = 0")
    return ((1.0, -C.a / C.b),
            (1.0, -(R.a + R.alpha) / R.b),
            (-1.0, C.a / C.b),
            (-1.0, (L.a - L.alpha) / L.b))


@dataclass
class HypothesisReport:
    h1: bool
    h2: bool
    h3: bool
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.h1 and self.h2 and self.h3

    def as_dict(self) -> dict:
        return {"h1": self.h1, "h2": self.h2, "h3": self.h3, "details": list(self.details)}


def check_hypotheses(sys: ThreeZoneSystem) -> HypothesisReport:
    details: list[str] = []

    try:
        kinds = _zone_kinds(sys)
    except DegenerateZone as exc:
        return HypothesisReport(False, False, False, [f"H1: {exc}"])
    center = kinds[1]
    h1 = center.kind is EquilibriumType.CENTER and center.placement is Placement.REAL
    if not h1:
        details.append("H1: central subsystem is not a real center")

    h2 = True
    if not (sys.left.b * sys.center.b > 0 and sys.right.b * sys.center.b > 0):
        h2 = False
        details.append("H2: b_L b_C > 0 and b_R b_C > 0 required")
    else:
        p1, p2, p3, p4 = tangent_points(sys)
        if abs(p1[1] - p2[1]) > TANGENT_TOL or abs(p3[1] - p4[1]) > TANGENT_TOL:
            h2 = False
            details.append("H2: tangent points do not coincide (P1 != P2 or P3 != P4)")

    boundary = [s.value for s, k in zip(Side, kinds) if k.placement is Placement.BOUNDARY]
    h3 = False
    if boundary:
        details.append(f"H3: equilibrium on a switching line in zone(s) {', '.join(boundary)}")
    elif h1 and h2:
        from .unperturbed import probe_annulus
        try:
            h3 = probe_annulus(_normalized(sys))
        except HypothesisViolation as exc:
            details.append(f"H3: {exc}")
        else:
            if not h3:
                details.append("H3: probe orbit does not close through the three zones")
    return HypothesisReport(h1, h2, h3, details)
