"""First-order Melnikov function of a normal-form three-zone system.

Closing each orbit arc with the segment of the switching line it starts and
ends on, Green's theorem turns every line integral into
``-(p + u) * (signed area) + (segment term)``. For a linear Hamiltonian flow
the area swept around the equilibrium e is ``(H(A) - H(e)) * t``, so each arc
contributes a multiple of ``h`` plus a multiple of (energy gap x flight time),
which is exactly one basis function:

* saddle zones: ``b^2 w^2 (h^2 - tau^2) log(...)``;
* center zones: ``(h^2 + rho^2) * theta(h)`` with theta the swept angle;
* the central zone: ``(h^2 + 1) arccos((h^2 - 1)/(h^2 + 1))``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DomainError, HypothesisViolation, QuadratureFailure
from .model import (
    EquilibriumType,
    Placement,
    Side,
    ThreeZoneSystem,
    ZoneHamiltonian,
    classify_system,
    classify_zone,
)
from .normal_form import verify_normal_form
from .unperturbed import (
    AnnulusInterval,
    ArcZone,
    BoundaryKind,
    annulus_interval,
    orbit_arcs,
    separatrix_ordinate,
)

EDGE_GUARD = 1e-9
DEFAULT_QUAD_TOL = 1e-10


class BasisKind(enum.Enum):
    F0 = "F0"
    FCC = "FCC"
    FRC = "FRC"
    FLC = "FLC"
    FRS = "FRS"
    FLS = "FLS"


@dataclass(frozen=True)
class BasisFunction:
    """One term of the Melnikov decomposition.

    Parametrized kinds carry the owning zone. ``real_center`` selects the
    long branch of the swept angle for an outer center lying inside its zone.
    """
    kind: BasisKind
    zone: ZoneHamiltonian | None = None
    real_center: bool = False

    @property
    def side(self) -> Side | None:
        if self.kind in (BasisKind.FRC, BasisKind.FRS):
            return Side.RIGHT
        if self.kind in (BasisKind.FLC, BasisKind.FLS):
            return Side.LEFT
        return None

    @property
    def upper(self) -> float:
        if self.kind in (BasisKind.FRS, BasisKind.FLS):
            return separatrix_ordinate(self.zone, self.side)
        return math.inf

    @property
    def name(self) -> str:
        return {"F0": "f0", "FCC": "fCC", "FRC": "fRC", "FLC": "fLC",
                "FRS": "fRS", "FLS": "fLS"}[self.kind.value]

    def __call__(self, h: float) -> float:
        return eval_basis(self, h)

    @classmethod
    def outer(cls, z: ZoneHamiltonian, side: Side) -> "BasisFunction":
        zk = classify_zone(z, side)
        right = side is Side.RIGHT
        if zk.kind is EquilibriumType.SADDLE:
            return cls(BasisKind.FRS if right else BasisKind.FLS, z)
        return cls(BasisKind.FRC if right else BasisKind.FLC, z,
                   real_center=zk.placement is Placement.REAL)


F0 = BasisFunction(BasisKind.F0)
FCC = BasisFunction(BasisKind.FCC)


def _fcc(h: float) -> float:
    return (h * h + 1.0) * math.acos((h * h - 1.0) / (h * h + 1.0))


def center_rho(z: ZoneHamiltonian, side: Side) -> float:
    """rho with (h^2 + rho^2) b^2 w^2 equal to the arccos denominator."""
    w = z.omega
    sgn = -1.0 if side is Side.RIGHT else 1.0
    return (z.a * z.a + sgn * z.b * z.beta + w * w) / (z.b * w)


def _outer_center(b: BasisFunction, h: float) -> float:
    z, side = b.zone, b.side
    w2 = -z.discriminant
    sgn = -1.0 if side is Side.RIGHT else 1.0
    m = z.a * z.a + sgn * z.b * z.beta
    denom = m * m + (2 * z.a * z.a + z.b * z.b * h * h + 2 * sgn * z.b * z.beta) * w2 + w2 * w2
    # arccos(1 - 2 b^2 w^2 h^2 / denom) == 2 atan(b w h / |m + w^2|), and the
    # latter keeps full precision when the arccos argument is close to 1
    theta = 2.0 * math.atan2(z.b * math.sqrt(w2) * h, abs(m + w2))
    if b.real_center:
        theta = 2 * math.pi - theta
    # monic normalization: the arccos denominator divided by b^2 w^2
    return denom / (z.b * z.b * w2) * theta


def _outer_saddle(b: BasisFunction, h: float) -> float:
    z = b.zone
    w = z.omega
    a2, bb, bwh, w2 = z.a * z.a, z.b * z.beta, z.b * w * h, w * w
    if b.kind is BasisKind.FRS:
        pre = (a2 - bb + bwh - w2) * (-a2 + bb + bwh + w2)
        arg = 1.0 - 2 * bwh / (-a2 + bb + bwh + w2)
    else:
        pre = (-a2 - bb + bwh + w2) * (a2 + bb + bwh - w2)
        arg = 1.0 + 2 * bwh / (a2 + bb - bwh - w2)
    if not arg > 0:
        raise DomainError(f"log argument {arg!r} not positive in {b.name}; h beyond tau?")
    return pre * math.log(arg)


def eval_basis(b: BasisFunction, h: float) -> float:
    h = float(h)
    upper = b.upper
    if not (0.0 < h < upper):
        raise DomainError(f"h = {h!r} outside the domain (0, {upper:.12g}) of {b.name}")
    if b.kind is BasisKind.F0:
        return h
    if b.kind is BasisKind.FCC:
        return _fcc(h)
    if b.kind in (BasisKind.FRC, BasisKind.FLC):
        return _outer_center(b, h)
    return _outer_saddle(b, h)


@dataclass(frozen=True)
class MelnikovForm:
    basis: tuple[BasisFunction, ...]
    coeffs: tuple[float, ...]
    domain: AnnulusInterval
    label: str = ""
    reflected: bool = False
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if len(self.basis) != len(self.coeffs):
            raise ValueError("basis and coefficient lists differ in length")

    def __call__(self, h: float) -> float:
        return eval_melnikov(self, h)

    def coefficient_dict(self) -> dict[str, float]:
        names = self.names or tuple("k_" + b.name[1:] for b in self.basis)
        return dict(zip(names, self.coeffs))

    def with_coeffs(self, coeffs) -> "MelnikovForm":
        return MelnikovForm(self.basis, tuple(float(c) for c in coeffs), self.domain,
                            self.label, self.reflected, self.names)


def _check_h(domain: AnnulusInterval, h: float) -> None:
    if not (domain.lower + EDGE_GUARD <= h and
            (not domain.bounded or h <= domain.upper - EDGE_GUARD)):
        raise DomainError(f"h = {h!r} not in the guarded interior of J = {domain}")


def eval_melnikov(form: MelnikovForm, h: float) -> float:
    h = float(h)
    _check_h(form.domain, h)
    return math.fsum(k * eval_basis(b, h) for k, b in zip(form.coeffs, form.basis) if k != 0.0)


def _require_normal_form(sys: ThreeZoneSystem) -> None:
    if not verify_normal_form(sys):
        raise HypothesisViolation("system is not in normal form; apply to_normal_form first",
                                  "normal form")


def _edge_slope(z: ZoneHamiltonian, side: Side) -> float:
    """Coefficient of h in the signed area swept by an outer arc.

    Right: ``e_x - 1``; left: ``-(1 + e_x)``, the triangle between the
    equilibrium and the chord on the switching line.
    """
    ex, _ = z.equilibrium()
    return ex - 1.0 if side is Side.RIGHT else -(1.0 + ex)


def _area_coefficient(z: ZoneHamiltonian, b: BasisFunction) -> float:
    """Signed area = coefficient * basis(h) + edge_slope * h."""
    w = z.omega
    if b.kind in (BasisKind.FRS, BasisKind.FLS):
        return 1.0 / (2 * z.b * w ** 3)
    return z.b / (2 * w)


def melnikov_coefficients(sys: ThreeZoneSystem) -> MelnikovForm:
    _require_normal_form(sys)
    cls = classify_system(sys)
    J = annulus_interval(sys)
    L, R = sys.left, sys.right
    pl, pc, pr = sys.left_pert, sys.center_pert, sys.right_pert
    bR, bL = R.b, L.b

    basis_r = BasisFunction.outer(R, Side.RIGHT)
    basis_l = BasisFunction.outer(L, Side.LEFT)
    kR = (pr.p + pr.u) * _area_coefficient(R, basis_r)
    kL = (bR / bL) * (pl.p + pl.u) * _area_coefficient(L, basis_l)
    kCC = bR * (pc.p + pc.u)
    k0 = (2 * bR * (pc.u - pc.p)
          + (bR / bL) * ((pl.p + pl.u) * _edge_slope(L, Side.LEFT) + 2 * (pl.p - pl.r))
          + (pr.p + pr.u) * _edge_slope(R, Side.RIGHT) + 2 * (pr.p + pr.r))

    if J.boundary_kind is BoundaryKind.HETEROCLINIC_ORBIT:
        return _heteroclinic_form(sys, J, cls.reflected)

    names = ("k0", "kCC", "kR" + basis_r.kind.value[2], "kL" + basis_l.kind.value[2])
    return MelnikovForm((F0, FCC, basis_r, basis_l), (k0, kCC, kR, kL), J,
                        cls.label, cls.reflected, names)


def _heteroclinic_form(sys: ThreeZoneSystem, J: AnnulusInterval, reflected: bool) -> MelnikovForm:
    """Three-term form when both separatrix ordinates coincide.

    Then f_LS = (b_L w_L / (b_R w_R))^2 f_RS, and the left edge slope equals
    b_L tau / w_L; both facts are substituted with tau taken from the right.
    """
    L, R = sys.left, sys.right
    pl, pc, pr = sys.left_pert, sys.center_pert, sys.right_pert
    bR, bL = R.b, L.b
    wL, wR = L.omega, R.omega
    m_r = R.a ** 2 - bR * R.beta
    k0 = (pr.p - pr.u + 2 * pr.r + 2 * bR * ((pl.p - pl.r) / bL + pc.u - pc.p)
          + (pr.p + pr.u) * m_r / wR ** 2
          + (pl.p + pl.u) * (m_r - wR ** 2) / (wL * wR))
    kCC = bR * (pc.p + pc.u)
    kRS = (wL * (pr.p + pr.u) + wR * (pl.p + pl.u)) / (2 * bR * wL * wR ** 3)
    return MelnikovForm((F0, FCC, BasisFunction(BasisKind.FRS, R)), (k0, kCC, kRS), J,
                        "SCS", reflected, ("k0", "kCC", "kRS"))


# --- independent oracle -----------------------------------------------------

_ARC_WEIGHT_SIDE = {
    ArcZone.R: Side.RIGHT,
    ArcZone.C_LOWER: Side.CENTER,
    ArcZone.L: Side.LEFT,
    ArcZone.C_UPPER: Side.CENTER,
}


def _arc_weights(sys: ThreeZoneSystem) -> dict[ArcZone, float]:
    bR, bL = sys.right.b, sys.left.b
    return {ArcZone.R: 1.0, ArcZone.C_LOWER: bR, ArcZone.L: bR / bL, ArcZone.C_UPPER: bR}


def arc_integral(arc, pert, quad_tol: float) -> tuple[float, float]:
    """Integral of g dx - f dy along the arc, time-parametrized."""
    def integrand(t):
        x, y = arc(t)
        dx, dy = arc.hamiltonian.field(x, y)
        return pert.g(x, y) * dx - pert.f(x, y) * dy

    val, err = integrate.quad(integrand, 0.0, arc.flight_time, epsabs=quad_tol,
                              epsrel=0.0, limit=400)
    return float(val), float(err)


def melnikov_oracle(sys: ThreeZoneSystem, h: float, quad_tol: float = DEFAULT_QUAD_TOL) -> float:
    """M(h) by adaptive quadrature of the four weighted line integrals."""
    _require_normal_form(sys)
    weights = _arc_weights(sys)
    total, total_err = [], 0.0
    for arc in orbit_arcs(sys, h):
        pert = sys.perturbation(_ARC_WEIGHT_SIDE[arc.zone])
        # a quarter of the budget per arc
        val, err = arc_integral(arc, pert, quad_tol / (4.0 * weights[arc.zone]))
        total.append(weights[arc.zone] * val)
        total_err += weights[arc.zone] * err
    if total_err > quad_tol:
        raise QuadratureFailure(f"estimated error {total_err:.3g} exceeds {quad_tol:.3g}")
    return math.fsum(total)


def melnikov_grid(sys: ThreeZoneSystem, hs, with_oracle: bool = False,
                  quad_tol: float = DEFAULT_QUAD_TOL):
    """Rows (h, M_closed[, M_oracle]) for CSV export."""
    form = melnikov_coefficients(sys)
    rows = []
    for h in hs:
        row = [float(h), eval_melnikov(form, h)]
        if with_oracle:
            row.append(melnikov_oracle(sys, h, quad_tol))
        rows.append(tuple(row))
    return rows


def basis_values(form: MelnikovForm, hs) -> np.ndarray:
    return np.array([[eval_basis(b, h) for b in form.basis] for h in hs])
