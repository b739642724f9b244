"""Wronskians, zero isolation and inverse design for Melnikov functions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import (
    DomainError,
    IllConditioned,
    NonInvertibleConvention,
    SingularDesign,
)
from .melnikov import (
    BasisFunction,
    BasisKind,
    MelnikovForm,
    center_rho,
    eval_basis,
    eval_melnikov,
    melnikov_coefficients,
)
from .model import ThreeZoneSystem, ZonePerturbation

ROOT_TOL = 1e-12
SIMPLE_TOL = 1e-8
EXTRAPOLATION_TOL = 1e-5
CERTIFICATE_TOL = 1e-6


class DerivativeMethod(enum.Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite-difference"


@dataclass(frozen=True)
class WronskianReport:
    h: float
    value: float
    order: int
    method: DerivativeMethod

    def as_dict(self) -> dict:
        return {"h": self.h, "value": self.value, "order": self.order, "method": self.method.value}


# --- derivatives ------------------------------------------------------------

def _fcc_derivatives(h: float) -> list[float]:
    theta = math.acos((h * h - 1.0) / (h * h + 1.0))
    q = 1.0 + h * h
    return [q * theta, 2 * h * theta - 2.0, 2 * theta - 4 * h / q, -8.0 / (q * q)]


def _fd_stencil(f, h: float, d: float) -> list[float]:
    fm2, fm1, f0, fp1, fp2 = (f(h + k * d) for k in (-2, -1, 0, 1, 2))
    return [(fp1 - fm1) / (2 * d),
            (fp1 - 2 * f0 + fm1) / (d * d),
            (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * d ** 3)]


def fd_derivatives(f, h: float, lo: float, hi: float, levels: int = 6) -> list[float]:
    """f and its first three derivatives by Richardson-extrapolated central differences.

    Steps start at a tenth of the distance to the nearer domain edge (capped at
    0.1) and halve ``levels - 1`` times; all three stencils have O(d^2) error.
    """
    dist = min(h - lo, hi - h)
    if not dist > 0:
        raise DomainError(f"h = {h!r} is not interior to ({lo}, {hi})")
    d0 = 0.1 * min(dist, 1.0)
    table = [np.array(_fd_stencil(f, h, d0 / 2 ** i)) for i in range(levels)]
    prev = None
    for j in range(1, levels):
        fac = 4.0 ** j
        prev = table[-1]
        table = [(fac * table[i + 1] - table[i]) / (fac - 1.0) for i in range(len(table) - 1)]
    best = table[0]
    scale = np.maximum(1.0, np.abs(best))
    if np.any(np.abs(best - prev) > EXTRAPOLATION_TOL * scale):
        raise IllConditioned(f"Richardson extrapolation did not settle at h = {h!r}")
    return [f(h), *best.tolist()]


def _leibniz(P, G) -> list[float]:
    """Derivatives 0..3 of a product from the factors' derivatives 0..3."""
    binom = ((1,), (1, 1), (1, 2, 1), (1, 3, 3, 1))
    return [sum(c * P[j] * G[k - j] for j, c in enumerate(binom[k])) for k in range(4)]


def _log_linear(c: float, d: float, h: float) -> list[float]:
    x = c + d * h
    return [math.log(abs(x)), d / x, -d * d / (x * x), 2 * d ** 3 / x ** 3]


def _saddle_derivatives(b: BasisFunction, h: float) -> list[float]:
    z = b.zone
    w = z.omega
    a2, bb, bw = z.a * z.a, z.b * z.beta, z.b * w
    if b.kind is BasisKind.FRS:
        m = -a2 + bb + w * w            # log argument is (m - bw h) / (m + bw h)
        u0, v0 = -m, m
        top, bottom = (m, -bw), (m, bw)
    else:
        n = a2 + bb - w * w             # log argument is (n + bw h) / (n - bw h)
        u0, v0 = -n, n
        top, bottom = (n, bw), (n, -bw)
    # prefactor (u0 + bw h)(v0 + bw h)
    P = [(u0 + bw * h) * (v0 + bw * h), bw * (u0 + v0 + 2 * bw * h), 2 * bw * bw, 0.0]
    # only the ratio must be positive; log|.| has the same derivatives
    if not (top[0] + top[1] * h) * (bottom[0] + bottom[1] * h) > 0:
        raise DomainError(f"h = {h!r} outside the domain of {b.name}")
    lt, lb = _log_linear(*top, h), _log_linear(*bottom, h)
    G = [x - y for x, y in zip(lt, lb)]
    return _leibniz(P, G)


def _center_derivatives(b: BasisFunction, h: float) -> list[float]:
    z = b.zone
    rho = abs(center_rho(z, b.side))
    q = rho * rho + h * h
    theta = 2.0 * math.atan2(h, rho)
    sign = 1.0
    if b.real_center:
        theta, sign = 2 * math.pi - theta, -1.0
    G = [theta,
         sign * 2 * rho / q,
         sign * -4 * rho * h / (q * q),
         sign * 4 * rho * (3 * h * h - rho * rho) / q ** 3]
    return _leibniz([q, 2 * h, 2.0, 0.0], G)


def basis_derivatives(b: BasisFunction, h: float,
                      method: DerivativeMethod = DerivativeMethod.ANALYTIC
                      ) -> tuple[list[float], DerivativeMethod]:
    """Values of b and its first three derivatives at h."""
    if b.kind is BasisKind.F0:
        return [h, 1.0, 0.0, 0.0], DerivativeMethod.ANALYTIC
    if b.kind is BasisKind.FCC:
        return _fcc_derivatives(h), DerivativeMethod.ANALYTIC
    if method is DerivativeMethod.FINITE_DIFFERENCE:
        return (fd_derivatives(lambda x: eval_basis(b, x), h, 0.0, b.upper),
                DerivativeMethod.FINITE_DIFFERENCE)
    if not 0.0 < h < b.upper:
        raise DomainError(f"h = {h!r} outside the domain of {b.name}")
    if b.kind in (BasisKind.FRS, BasisKind.FLS):
        return _saddle_derivatives(b, h), DerivativeMethod.ANALYTIC
    return _center_derivatives(b, h), DerivativeMethod.ANALYTIC


def wronskian(funcs, h: float,
              method: DerivativeMethod = DerivativeMethod.ANALYTIC) -> WronskianReport:
    funcs = list(funcs)
    n = len(funcs)
    if not 1 <= n <= 4:
        raise ValueError("between one and four functions are supported")
    upper = min(b.upper for b in funcs)
    if not 0.0 < h < upper:
        raise DomainError(f"h = {h!r} outside the common domain (0, {upper:.12g})")
    cols, used = [], DerivativeMethod.ANALYTIC
    for b in funcs:
        ders, m = basis_derivatives(b, h, method)
        if m is DerivativeMethod.FINITE_DIFFERENCE:
            used = m
        cols.append(ders[:n])
    W = np.array(cols).T
    value = float(np.linalg.det(W)) if n > 1 else float(W[0, 0])
    return WronskianReport(float(h), value, n, used)


@dataclass(frozen=True)
class IndependenceCertificate:
    certified: bool
    witness: float | None
    value: float | None

    def __bool__(self):
        return self.certified


def independence_certificate(funcs, interval: tuple[float, float],
                             samples: int = 64) -> IndependenceCertificate:
    """Search interior sample points for a Wronskian bounded away from zero.

    Returns the sample with the largest |W|; failure means no certificate was
    found, not that the functions are dependent.
    """
    lo, hi = interval
    if not math.isfinite(hi):
        raise DomainError("independence_certificate needs a finite interval")
    best = (0.0, None)
    for h in np.linspace(lo, hi, samples + 2)[1:-1]:
        try:
            w = wronskian(funcs, float(h)).value
        except (DomainError, IllConditioned):
            continue
        if abs(w) > abs(best[0]):
            best = (w, float(h))
    if best[1] is not None and abs(best[0]) > CERTIFICATE_TOL:
        return IndependenceCertificate(True, best[1], best[0])
    return IndependenceCertificate(False, None, None)


# --- zeros ------------------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    h: float
    residual: float
    derivative: float
    simple: bool

    def as_dict(self) -> dict:
        return {"h": self.h, "residual": self.residual, "derivative": self.derivative,
                "simple": self.simple}


@dataclass(frozen=True)
class ZeroSet:
    zeros: tuple[Zero, ...]
    brackets: tuple[tuple[float, float], ...]
    scan: tuple[float, float]
    advisories: tuple[str, ...] = field(default=())

    @property
    def locations(self) -> list[float]:
        return [z.h for z in self.zeros]

    def __len__(self):
        return len(self.zeros)

    def as_dict(self) -> dict:
        return {"zeros": [z.as_dict() for z in self.zeros],
                "brackets": [list(b) for b in self.brackets],
                "scan": list(self.scan), "advisories": list(self.advisories)}


def scan_window(form: MelnikovForm, cap: float | None = None) -> tuple[float, float]:
    lo = form.domain.lower
    hi = form.domain.upper if form.domain.bounded else (cap if cap is not None else 10.0)
    span = hi - lo
    delta = max(1e-6 * span, 1e-9)
    return lo + delta, hi - delta


def melnikov_derivative(form: MelnikovForm, h: float, step: float) -> float:
    lo, hi = form.domain.lower, form.domain.upper
    step = min(step, 0.5 * (h - lo - 1e-9), 0.5 * (hi - h - 1e-9)) if form.domain.bounded \
        else min(step, 0.5 * (h - lo - 1e-9))
    return (eval_melnikov(form, h + step) - eval_melnikov(form, h - step)) / (2 * step)


def find_zeros(form: MelnikovForm, grid: int = 400, cap: float | None = None) -> ZeroSet:
    """Isolate the zeros of M on the (capped) annulus interval.

    For unbounded domains ``cap`` bounds the scan; the default is 10.
    """
    if grid < 16:
        raise ValueError("grid must be at least 16")
    lo, hi = scan_window(form, cap)
    if all(k == 0.0 for k in form.coeffs):
        return ZeroSet((), (), (lo, hi), ("M is identically zero",))
    hs = np.linspace(lo, hi, grid)
    vals = np.array([eval_melnikov(form, h) for h in hs])
    span = hi - lo
    brackets, roots, advisories = [], [], []
    for i in range(grid - 1):
        a, b, fa, fb = hs[i], hs[i + 1], vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(float(a))
            continue
        if fa * fb < 0:
            brackets.append((float(a), float(b)))
            roots.append(optimize.brentq(lambda x: eval_melnikov(form, x), a, b,
                                         xtol=ROOT_TOL, rtol=4 * np.finfo(float).eps))
    if vals[-1] == 0.0:
        roots.append(float(hs[-1]))
    for (a0, b0), (a1, b1) in zip(brackets, brackets[1:]):
        if b0 == a1:
            advisories.append(f"adjacent brackets touch at h = {b0:.12g}; grid may be too coarse")
    zeros = []
    for r in roots:
        d = melnikov_derivative(form, r, 1e-6 * span)
        simple = abs(d) > SIMPLE_TOL
        if not simple:
            advisories.append(f"zero at h = {r:.12g} is not simple")
        zeros.append(Zero(float(r), abs(eval_melnikov(form, r)), float(d), simple))
    return ZeroSet(tuple(zeros), tuple(brackets), (lo, hi), tuple(advisories))


# --- inverse design ---------------------------------------------------------

_PARAM_INDEX = {  # position in the 18-vector ordered left, center, right
    "p_L": 0, "r_L": 2, "u_L": 4,
    "p_C": 6, "u_C": 10,
    "p_R": 12, "r_R": 14, "u_R": 16,
}
PRIMARY_UNKNOWNS = ("p_C", "p_R", "p_L", "r_L")


@dataclass(frozen=True)
class Design:
    targets: tuple[float, ...]
    coefficients: tuple[float, ...]
    perturbations: tuple[ZonePerturbation, ZonePerturbation, ZonePerturbation]
    system: ThreeZoneSystem
    freed: tuple[str, ...]

    def as_dict(self) -> dict:
        names = ("left", "center", "right")
        return {
            "targets": list(self.targets),
            "coefficients": list(self.coefficients),
            "unknowns": list(self.freed),
            "perturbation": {n: dict(zip("pqrsuv", w.as_tuple()))
                             for n, w in zip(names, self.perturbations)},
        }


def coefficient_map(sys: ThreeZoneSystem, unknowns) -> np.ndarray:
    """Columns: Melnikov coefficients produced by a unit value of each unknown."""
    base = sys.unperturbed()
    cols = []
    for name in unknowns:
        vec = np.zeros(18)
        vec[_PARAM_INDEX[name]] = 1.0
        cols.append(melnikov_coefficients(base.with_perturbation_vector(vec)).coeffs)
    return np.array(cols, dtype=float).T


def _null_vector(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    _, s, vt = np.linalg.svd(A)
    if s[n - 1] <= 1e-12 * s[0]:
        raise SingularDesign("basis values at the targets are rank deficient")
    k = vt[-1].copy()
    pivot = k[0] if abs(k[0]) > 1e-14 else k[np.flatnonzero(np.abs(k) > 1e-14)[0]]
    return -k if pivot < 0 else k


def _validate_targets(form: MelnikovForm, targets) -> tuple[float, ...]:
    t = tuple(sorted(float(x) for x in targets))
    if len(t) == 0:
        raise DomainError("at least one target zero is required")
    if len(set(t)) != len(t):
        raise DomainError("target zeros must be distinct")
    dom = form.domain
    for x in t:
        if not (dom.lower < x and (not dom.bounded or x < dom.upper)):
            raise DomainError(f"target {x!r} outside J = {dom}")
    if len(t) + 1 > len(form.basis):
        raise DomainError(f"{len(form.basis)} basis functions can place at most "
                          f"{len(form.basis) - 1} zeros")
    return t


def design_perturbation(sys: ThreeZoneSystem, targets) -> Design:
    """Perturbation whose Melnikov function vanishes at ``targets``.

    With n targets the first n + 1 basis functions are combined through the
    null space of their values at the targets; the coefficient vector is then
    mapped back to (p_C, p_R, p_L, r_L) with every u and r_R set to zero.
    """
    form = melnikov_coefficients(sys)
    t = _validate_targets(form, targets)
    m = len(t) + 1
    A = np.array([[eval_basis(b, h) for b in form.basis[:m]] for h in t])
    k = np.zeros(len(form.basis))
    k[:m] = _null_vector(A)

    freed = PRIMARY_UNKNOWNS
    C = coefficient_map(sys, freed)
    x = None
    if C.shape[0] == C.shape[1] and np.linalg.cond(C) < 1e12:
        x = np.linalg.solve(C, k)
    else:
        freed = PRIMARY_UNKNOWNS + ("r_R",)
        C = coefficient_map(sys, freed)
        x, *_ = np.linalg.lstsq(C, k, rcond=None)
        if np.linalg.norm(C @ x - k) > 1e-10 * max(1.0, np.linalg.norm(k)):
            raise NonInvertibleConvention("coefficient map cannot reach the designed vector")

    vec = np.zeros(18)
    for name, val in zip(freed, x):
        vec[_PARAM_INDEX[name]] = val
    vec /= np.max(np.abs(vec))
    designed = sys.with_perturbation_vector(vec)
    coeffs = melnikov_coefficients(designed).coeffs
    return Design(t, tuple(coeffs),
                  (designed.left_pert, designed.center_pert, designed.right_pert),
                  designed, freed)


def analysis_report(sys: ThreeZoneSystem, form: MelnikovForm, zeros: ZeroSet | None = None,
                    design: Design | None = None, wronskian_h: float | None = None) -> dict:
    """JSON-ready report: the class and interval, then any optional sections."""
    dom = form.domain
    report = {
        "class": form.label,
        "reflected": form.reflected,
        "interval": {"lower": dom.lower, "upper": dom.upper if dom.bounded else None,
                     "boundary": dom.boundary_kind.value},
    }
    if wronskian_h is not None:
        report["wronskian_witness"] = wronskian(form.basis, wronskian_h).as_dict()
    else:
        hi = dom.upper if dom.bounded else 5.0
        cert = independence_certificate(form.basis, (dom.lower, hi))
        report["wronskian_witness"] = ({"h": cert.witness, "value": cert.value}
                                       if cert else None)
    if zeros is not None:
        report["zeros"] = [z.as_dict() for z in zeros.zeros]
        report["advisories"] = list(zeros.advisories)
    if design is not None:
        report["design"] = design.as_dict()
    return report
