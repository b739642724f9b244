
import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from pwlmelnikov.analysis import (
    DerivativeMethod,
    basis_derivatives,
    design_perturbation,
    find_zeros,
    independence_certificate,
    wronskian,
)
from pwlmelnikov.errors import DomainError
from pwlmelnikov.melnikov import F0, FCC, BasisKind, melnikov_coefficients
from pwlmelnikov.model import ZonePerturbation
from pwlmelnikov.scenarios import SCENARIOS, WRONSKIAN_GOLDENS

from strategies import scs_systems, tau_of


def _mp_basis(b):
    """High-precision restatement of a basis function for derivative checks."""
    if b.kind is BasisKind.F0:
        return lambda h: h
    if b.kind is BasisKind.FCC:
        return lambda h: (h * h + 1) * mp.acos((h * h - 1) / (h * h + 1))
    z = b.zone
    a, bb, beta = mp.mpf(z.a), mp.mpf(z.b), mp.mpf(z.beta)
    d = a * a + bb * mp.mpf(z.c)
    w = mp.sqrt(abs(d))
    sgn = -1 if b.kind in (BasisKind.FRS, BasisKind.FRC) else 1
    if b.kind in (BasisKind.FRC, BasisKind.FLC):
        m = a * a + sgn * bb * beta
        rho = (m + w * w) / (bb * w)

        def f(h):
            th = 2 * mp.atan2(bb * w * h, abs(m + w * w))
            if b.real_center:
                th = 2 * mp.pi - th
            return (h * h + rho * rho) * th
        return f
    a2, w2 = a * a, w * w

    def g(h):
        bwh = bb * w * h
        if b.kind is BasisKind.FRS:
            return ((a2 - bb * beta + bwh - w2) * (-a2 + bb * beta + bwh + w2)
                    * mp.log(1 - 2 * bwh / (-a2 + bb * beta + bwh + w2)))
        return ((-a2 - bb * beta + bwh + w2) * (a2 + bb * beta + bwh - w2)
                * mp.log(1 + 2 * bwh / (a2 + bb * beta - bwh - w2)))
    return g


def _mp_wronskian(basis, h):
    with mp.workdps(40):
        n = len(basis)
        fs = [_mp_basis(b) for b in basis]
        M = mp.matrix(n, n)
        for j, f in enumerate(fs):
            for i in range(n):
                M[i, j] = mp.diff(f, mp.mpf(h), i)
        return float(mp.det(M))


def test_single_function_wronskian():
    assert wronskian([F0], 1.0).value == 1.0


def test_pair_wronskian_f0_fcc():
    # W(h, (h^2+1) acos(...)) = h f' - f
    h = 0.8
    d = basis_derivatives(FCC, h)[0]
    assert wronskian([F0, FCC], h).value == pytest.approx(h * d[1] - d[0], rel=1e-13)


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_analytic_derivatives_match_high_precision(name):
    form = melnikov_coefficients(SCENARIOS[name].system())
    for h in (0.2, 0.4, 0.6):
        got = wronskian(form.basis, h).value
        ref = _mp_wronskian(form.basis, h)
        assert got == pytest.approx(ref, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("name", ["scs-a", "ccs-c", "ccc-a"])
def test_finite_differences_agree_with_analytic(name):
    form = melnikov_coefficients(SCENARIOS[name].system())
    a = wronskian(form.basis, 0.4).value
    rep = wronskian(form.basis, 0.4, method=DerivativeMethod.FINITE_DIFFERENCE)
    assert rep.method is DerivativeMethod.FINITE_DIFFERENCE
    assert rep.value == pytest.approx(a, rel=1e-3)


@pytest.mark.parametrize("name", ["scs-a", "scs-b", "ccs-c"])
def test_wronskian_reproduces_reported_values(name):
    h, value, tol = WRONSKIAN_GOLDENS[name]
    form = melnikov_coefficients(SCENARIOS[name].system())
    assert abs(wronskian(form.basis, h).value - value) <= tol


def test_wronskian_domain():
    form = melnikov_coefficients(SCENARIOS["scs-a"].system())
    with pytest.raises(DomainError):
        wronskian(form.basis, 1.5)
    with pytest.raises(ValueError):
        wronskian([], 0.5)


def test_certificate_fails_for_repeated_function():
    assert not independence_certificate([F0, F0], (0.0, 1.0))


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_certificate_found_for_scenario_bases(name):
    form = melnikov_coefficients(SCENARIOS[name].system())
    hi = form.domain.upper if form.domain.bounded else 5.0
    cert = independence_certificate(form.basis, (0.0, hi))
    assert cert and 0.0 < cert.witness < hi


def test_find_zeros_of_identically_zero_form():
    zs = find_zeros(melnikov_coefficients(SCENARIOS["scs-a"].system()))
    assert len(zs) == 0 and zs.advisories == ("M is identically zero",)


def test_find_zeros_single_root():
    # center-only perturbation: M = 2 (u - p) h + (p + u) fCC
    s = SCENARIOS["ccc-a"].system(center_pert=ZonePerturbation(p=1.0, u=-0.2))
    form = melnikov_coefficients(s)
    zs = find_zeros(form)
    assert len(zs) == 1 and zs.zeros[0].simple
    h = zs.locations[0]
    assert abs(form(h)) < 1e-10


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_design_round_trip(name):
    sc = SCENARIOS[name]
    d = design_perturbation(sc.system(), sc.targets)
    form = melnikov_coefficients(d.system)
    for h in sc.targets:
        assert abs(form(h)) < 1e-10
    found = find_zeros(form, cap=max(sc.targets) * 2 if not form.domain.bounded else None)
    for h in sc.targets:
        assert min(abs(h - z) for z in found.locations) < 1e-9
    assert max(abs(v) for v in d.system.perturbation_vector()) == pytest.approx(1.0)


def test_design_rejects_bad_targets():
    s = SCENARIOS["scs-a"].system()
    with pytest.raises(DomainError):
        design_perturbation(s, (0.3, 0.3))
    with pytest.raises(DomainError):
        design_perturbation(s, (0.3, 1.2))
    with pytest.raises(DomainError):
        design_perturbation(s, (0.1, 0.2, 0.3, 0.4))
    with pytest.raises(DomainError):
        design_perturbation(s, ())


def test_heteroclinic_case_frees_r_right():
    d = design_perturbation(SCENARIOS["scs-b"].system(), (0.3, 0.7))
    assert len(melnikov_coefficients(d.system).basis) == 3
    assert "r_R" in d.freed


@given(scs_systems(), st.floats(0.15, 0.45), st.floats(0.55, 0.85), st.floats(0.1, 10.0))
def test_zeros_invariant_under_scaling_the_perturbation(sys, f1, f2, lam):
    tau = tau_of(sys)
    d = design_perturbation(sys, (f1 * tau, f2 * tau))
    scaled = d.system.with_perturbation_vector(lam * np.array(d.system.perturbation_vector()))
    z1 = find_zeros(melnikov_coefficients(d.system)).locations
    z2 = find_zeros(melnikov_coefficients(scaled)).locations
    assert len(z1) == len(z2) and np.allclose(z1, z2, atol=1e-10)
