"""Reduction of an admissible system to the normal form.

In the normal form the central Hamiltonian is x^2/2 + y^2/2, the outer ones
satisfy alpha_L = a_L and alpha_R = -a_R, and b_L, b_R > 0. The reduction is

    (x, y) = T (u, v) + (0, y0),   T = [[1, 0], [-a_C/b_C, w_C/b_C]],

followed by the time rescaling t~ = w_C t with w_C = sqrt(-a_C^2 - b_C c_C).
A Hamiltonian field pulled back through a linear map T becomes Hamiltonian
with H o T / det T, so every zone's new Hamiltonian is
(b_C / w_C^2) * H_i(T U + shift) up to an additive constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateZone, HypothesisViolation
from .model import (
    DEGENERACY_TOL,
    Side,
    ThreeZoneSystem,
    ZoneHamiltonian,
    ZonePerturbation,
)

CH01_TOL = 1e-10
IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class NormalFormResult:
    system: ThreeZoneSystem
    transform: np.ndarray
    translation: np.ndarray
    time_scale: float

    def to_normal_coords(self, x, y):
        """Original (x, y) -> normal-form (u, v)."""
        X = np.array([x, y], dtype=float) - self.translation
        return tuple(np.linalg.solve(self.transform, X))

    def from_normal_coords(self, u, v):
        return tuple(self.transform @ np.array([u, v], dtype=float) + self.translation)


def conjugate_zone(z: ZoneHamiltonian, T: np.ndarray, shift, scale: float) -> ZoneHamiltonian:
    """Coefficients of scale * H(T U + shift), dropping the constant term."""
    Q = np.array([[-z.c, z.a], [z.a, z.b]])
    g = np.array([-z.beta, z.alpha])
    shift = np.asarray(shift, dtype=float)
    Qn = scale * (T.T @ Q @ T)
    gn = scale * (T.T @ (Q @ shift + g))
    return ZoneHamiltonian(a=float(Qn[0, 1]), b=float(Qn[1, 1]), c=float(-Qn[0, 0]),
                           alpha=float(gn[1]), beta=float(-gn[0]))


def conjugate_perturbation(w: ZonePerturbation, T: np.ndarray, shift,
                           time_scale: float) -> ZonePerturbation:
    """Perturbation (f, g) seen in the new coordinates and rescaled time."""
    P = np.array([[w.p, w.q], [w.s, w.u]])
    off = np.array([w.r, w.v])
    shift = np.asarray(shift, dtype=float)
    Tinv = np.linalg.inv(T)
    Pn = Tinv @ P @ T / time_scale
    offn = Tinv @ (P @ shift + off) / time_scale
    return ZonePerturbation(p=float(Pn[0, 0]), q=float(Pn[0, 1]), r=float(offn[0]),
                            s=float(Pn[1, 0]), u=float(Pn[1, 1]), v=float(offn[1]))


def _check_ch01(sys: ThreeZoneSystem) -> None:
    L, C, R = sys.left, sys.center, sys.right
    if L.b <= 0 or R.b <= 0:
        raise HypothesisViolation("outer zones need b_L > 0 and b_R > 0", "H2")
    alpha_l = (L.a * C.b - C.a * L.b) / C.b
    alpha_r = (-R.a * C.b + C.a * R.b) / C.b
    if abs(L.alpha - alpha_l) > CH01_TOL or abs(R.alpha - alpha_r) > CH01_TOL:
        raise HypothesisViolation(
            f"tangency conditions fail: alpha_L={L.alpha:.12g} (need {alpha_l:.12g}), "
            f"alpha_R={R.alpha:.12g} (need {alpha_r:.12g})", "H2")


def to_normal_form(sys: ThreeZoneSystem) -> NormalFormResult:
    C = sys.center
    d = C.discriminant
    if abs(d) < DEGENERACY_TOL or C.b == 0:
        raise DegenerateZone("central zone is degenerate; w_C is undefined")
    if d > 0:
        raise HypothesisViolation("central subsystem is a saddle", "H1")
    if C.b < 0:
        raise HypothesisViolation("central orbits turn counter-clockwise (b_C < 0)", "H3")
    x0, y0 = C.equilibrium()
    if abs(x0) > CH01_TOL:
        # only vertical shifts keep both lines x = +-1 in place
        raise HypothesisViolation(
            f"central equilibrium at x = {x0:.6g}; a line-preserving normal form needs x = 0",
            "H1")
    shift = np.array([0.0, y0])
    eye = np.eye(2)
    translated = ThreeZoneSystem(
        left=conjugate_zone(sys.left, eye, shift, 1.0),
        center=conjugate_zone(sys.center, eye, shift, 1.0),
        right=conjugate_zone(sys.right, eye, shift, 1.0),
    )
    _check_ch01(translated)

    omega = math.sqrt(-d)
    T = np.array([[1.0, 0.0], [-C.a / C.b, omega / C.b]])
    scale = C.b / (omega * omega)
    new = ThreeZoneSystem(
        left=conjugate_zone(sys.left, T, shift, scale),
        center=conjugate_zone(sys.center, T, shift, scale),
        right=conjugate_zone(sys.right, T, shift, scale),
        left_pert=conjugate_perturbation(sys.left_pert, T, shift, omega),
        center_pert=conjugate_perturbation(sys.center_pert, T, shift, omega),
        right_pert=conjugate_perturbation(sys.right_pert, T, shift, omega),
        epsilon=sys.epsilon,
    )
    return NormalFormResult(new, T, shift, omega)


def verify_normal_form(sys: ThreeZoneSystem) -> bool:
    tol = IDENTITY_TOL
    C, L, R = sys.center, sys.left, sys.right
    center_ok = all(abs(v - t) <= tol for v, t in zip(C.as_tuple(), (0.0, 1.0, -1.0, 0.0, 0.0)))
    return (center_ok and abs(L.alpha - L.a) <= tol and abs(R.alpha + R.a) <= tol
            and L.b > tol and R.b > tol)


def pushforward_field(result: NormalFormResult, original: ThreeZoneSystem,
                      side: Side, x: float, y: float) -> np.ndarray:
    """Unperturbed field of ``original`` at (x, y) expressed in normal-form coordinates."""
    fx, fy = original.zone(side).field(x, y)
    return np.linalg.solve(result.transform, np.array([fx, fy]))
