import math

import numpy as np
import pytest

from pwlmelnikov.analysis import design_perturbation, find_zeros
from pwlmelnikov.errors import DomainError, SlidingDetected
from pwlmelnikov.melnikov import melnikov_coefficients
from pwlmelnikov.model import Side, ZonePerturbation
from pwlmelnikov.integrator import (
    Status,
    integrate_crossing,
    locate_limit_cycles,
    poincare_sample,
    revolution_time,
    trajectory_rows,
)
from pwlmelnikov.scenarios import SCENARIOS
from pwlmelnikov.unperturbed import outer_flight_time, period

from strategies import tau_of

SCS_A = SCENARIOS["scs-a"].system()


def test_start_at_tangent_point_stops():
    traj = integrate_crossing(SCS_A, (1.0, 0.0), 10.0)
    assert traj.status is Status.TANGENCY and traj.events == []


def test_first_exit_time_matches_closed_form():
    traj = integrate_crossing(SCS_A, (1.0, 0.5), 50.0, max_crossings=1)
    ev = traj.events[0]
    assert ev.source is Side.RIGHT and ev.target is Side.CENTER
    assert ev.time == pytest.approx(math.log(3.0), abs=1e-10)
    assert ev.point[1] == pytest.approx(-0.5, abs=1e-10)


def test_revolution_visits_zones_in_order():
    s = poincare_sample(SCS_A, 0.5, 0.0)
    assert [(e.source, e.target) for e in s.events] == [
        (Side.RIGHT, Side.CENTER), (Side.CENTER, Side.LEFT),
        (Side.LEFT, Side.CENTER), (Side.CENTER, Side.RIGHT)]


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_unperturbed_orbits_close(name):
    sys = SCENARIOS[name].system()
    for frac in (0.1, 0.5, 0.9):
        h = frac * tau_of(sys)
        s = poincare_sample(sys, h, 0.0)
        assert abs(s.d_return) < 1e-9
        assert s.period == pytest.approx(period(sys, h), abs=1e-8)


def test_revolution_time_is_period():
    assert revolution_time(SCS_A, 0.3) == pytest.approx(period(SCS_A, 0.3), abs=1e-9)


def test_sliding_is_reported():
    s = SCS_A.with_perturbations(ZonePerturbation(), ZonePerturbation(), ZonePerturbation(r=1.0)).with_epsilon(0.01)
    with pytest.raises(SlidingDetected):
        integrate_crossing(s, (1.0, -0.005), 5.0)


def test_epsilon_limits():
    with pytest.raises(DomainError):
        poincare_sample(SCS_A, 0.5, 0.5)
    with pytest.raises(DomainError):
        poincare_sample(SCS_A, 1.5, 0.0)


def test_single_target_gives_one_cycle():
    d = design_perturbation(SCS_A, (0.5,))
    zs = find_zeros(melnikov_coefficients(d.system))
    assert zs.locations == pytest.approx([0.5], abs=1e-9)
    found = locate_limit_cycles(d.system, 1e-3, zs)
    assert len(found) == 1
    assert found[0].h_star == pytest.approx(0.5, abs=0.02)
    assert found[0].fixed_point_residual < 1e-9


def test_no_cycles_without_perturbation():
    zs = find_zeros(melnikov_coefficients(SCS_A))
    assert len(locate_limit_cycles(SCS_A, 1e-3, zs)) == 0


def test_trajectory_rows_shape():
    rows = trajectory_rows(SCS_A, 0.5, 0.0)
    assert rows[0][:3] == (0.0, 1.0, 0.5)
    assert {r[3] for r in rows} == {"right", "center", "left"}
    t = np.array([r[0] for r in rows])
    assert np.all(np.diff(t) >= 0)


def test_small_h_right_arc_time():
    traj = integrate_crossing(SCS_A, (1.0, 0.01), 50.0, max_crossings=1)
    assert traj.events[0].time == pytest.approx(
        outer_flight_time(SCS_A.right, Side.RIGHT, 0.01), abs=1e-10)


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_richardson_limit_of_energy_quotient(name):
    # two-point extrapolation in eps removes the first-order error term
    sc = SCENARIOS[name]
    sys = design_perturbation(sc.system(), sc.targets).system
    form = melnikov_coefficients(sys)
    for frac in (0.3, 0.6):
        h = frac * tau_of(sys)
        q1 = poincare_sample(sys, h, 1e-3).h_energy_diff / 1e-3
        q2 = poincare_sample(sys, h, 5e-4).h_energy_diff / 5e-4
        assert abs(2 * q2 - q1 - form(h)) < 1e-5


def test_richardson_residual_is_second_order():
    rng = np.random.default_rng(4)
    sys = SCS_A.with_perturbation_vector(rng.uniform(-1, 1, 18))
    m = melnikov_coefficients(sys)(0.3)
    eps = (1e-3, 5e-4, 2.5e-4, 1.25e-4)
    q = [poincare_sample(sys, 0.3, e).h_energy_diff / e for e in eps]
    r = [abs(2 * b - a - m) for a, b in zip(q, q[1:])]
    orders = [math.log2(a / b) for a, b in zip(r, r[1:])]
    assert all(1.7 < p < 2.3 for p in orders)
