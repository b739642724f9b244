import math

import pytest
from hypothesis import given, strategies as st

from pwlmelnikov.errors import DegenerateZone, HypothesisViolation
from pwlmelnikov.model import (
    EquilibriumType,
    Placement,
    Side,
    ThreeZoneSystem,
    ZoneHamiltonian,
    ZonePerturbation,
    check_hypotheses,
    classify_system,
    classify_zone,
    normal_form_system,
    reflect,
    tangent_points,
)
from pwlmelnikov.scenarios import SCENARIOS

from strategies import scs_systems


def test_right_saddle_is_real_at_2_0():
    k = classify_zone(ZoneHamiltonian(0, 1, 1, 0, -2), Side.RIGHT)
    assert k.kind is EquilibriumType.SADDLE
    assert k.placement is Placement.REAL
    assert k.equilibrium == pytest.approx((2.0, 0.0))


def test_normal_center_at_origin():
    k = classify_zone(ZoneHamiltonian(0, 1, -1, 0, 0), Side.CENTER)
    assert k.kind is EquilibriumType.CENTER and k.placement is Placement.REAL
    assert k.equilibrium == pytest.approx((0.0, 0.0))


def test_left_center_virtual_at_3_minus2():
    k = classify_zone(ZoneHamiltonian(1, 2, -1, 1, 1), Side.LEFT)
    assert k.kind is EquilibriumType.CENTER and k.placement is Placement.VIRTUAL
    assert k.equilibrium == pytest.approx((3.0, -2.0))


def test_boundary_placement():
    # equilibrium exactly on x = 1
    k = classify_zone(ZoneHamiltonian(0, 1, 1, 0, -1), Side.RIGHT)
    assert k.placement is Placement.BOUNDARY


def test_degenerate_zone_raises():
    with pytest.raises(DegenerateZone):
        classify_zone(ZoneHamiltonian(1, 1, -1), Side.LEFT)


@given(st.floats(0.01, 100.0))
def test_classification_invariant_under_positive_scaling(lam):
    for z, side in ((ZoneHamiltonian(0, 1, 1, 0, -2), Side.RIGHT),
                    (ZoneHamiltonian(1, 2, -1, 1, 1), Side.LEFT),
                    (ZoneHamiltonian(1, 2, -1, 1, -2), Side.LEFT)):
        k0, k1 = classify_zone(z, side), classify_zone(z.scaled(lam), side)
        assert (k0.kind, k0.placement) == (k1.kind, k1.placement)


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_scenario_classes(name):
    sc = SCENARIOS[name]
    assert classify_system(sc.system()).label == sc.label


def test_scenario_equilibria_match_reported_points():
    expected = {"scs-a": ((-3, 2), (2, 0)), "scs-b": ((-2, 1), (2, 0)),
                "ccs-c": ((3, -2), (2, 0)), "ccs-d": ((-3, 1), (2, 0)),
                "ccc-a": ((3, -2), (0, 0)), "ccc-b": ((-5, 2), (0, 0)),
                "ccc-c": ((-5, 2), (2, 0))}
    for name, (el, er) in expected.items():
        s = SCENARIOS[name].system()
        assert s.left.equilibrium() == pytest.approx(el)
        assert s.right.equilibrium() == pytest.approx(er)


def test_saddle_center_raises_h1():
    s = normal_form_system((1, 1, 0, 2), (0, 1, 1, -2))
    bad = ThreeZoneSystem(s.left, ZoneHamiltonian(0, 1, 1), s.right)
    with pytest.raises(HypothesisViolation):
        classify_system(bad)
    assert check_hypotheses(bad).h1 is False


def test_scc_reads_as_reflected_ccs():
    s = reflect(SCENARIOS["ccs-c"].system())
    cls = classify_system(s)
    assert cls.label == "CCS" and cls.reflected


@given(scs_systems())
def test_reflection_swaps_end_letters_and_is_involutive(sys):
    r = reflect(sys)
    assert reflect(r) == sys
    a = classify_system(sys).kinds
    b = classify_system(r).kinds
    assert (a[0].letter, a[2].letter) == (b[2].letter, b[0].letter)


def test_hypotheses_hold_for_normal_form_scs():
    rep = check_hypotheses(SCENARIOS["scs-a"].system())
    assert rep.ok, rep.details


def test_negative_b_left_fails_h2():
    s = SCENARIOS["scs-a"].system()
    bad = ThreeZoneSystem(ZoneHamiltonian(1, -1, 0, 1, 2), s.center, s.right)
    assert check_hypotheses(bad).h2 is False


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_hypotheses_hold_for_all_scenarios(name):
    assert check_hypotheses(SCENARIOS[name].system()).ok


def test_tangent_points_normal_form():
    p1, p2, p3, p4 = tangent_points(SCENARIOS["scs-a"].system())
    assert p1 == (1.0, 0.0) and p3 == (-1.0, 0.0)
    assert p2 == pytest.approx((1.0, 0.0)) and p4 == pytest.approx((-1.0, 0.0))


def test_tangent_point_formula():
    s = ThreeZoneSystem(ZoneHamiltonian(1, 1, 0), ZoneHamiltonian(1, 2, -3), ZoneHamiltonian(0, 1, 1))
    assert tangent_points(s)[0] == (1.0, -0.5)


def test_tangent_points_need_nonzero_b():
    s = SCENARIOS["scs-a"].system()
    with pytest.raises(DegenerateZone):
        tangent_points(ThreeZoneSystem(s.left, s.center, ZoneHamiltonian(1, 0, 1)))


def test_perturbation_vector_roundtrip():
    s = SCENARIOS["scs-a"].system()
    vec = [float(i) for i in range(18)]
    assert list(s.with_perturbation_vector(vec).perturbation_vector()) == vec


def test_epsilon_range_enforced():
    s = SCENARIOS["scs-a"].system()
    with pytest.raises(ValueError):
        s.with_epsilon(1.0)


def test_perturbation_must_be_finite():
    with pytest.raises(ValueError):
        ZonePerturbation(p=math.nan)
