"""Built-in normal-form configurations, one per studied phase-portrait case.

Outer zones are given as (a, b, c, beta); the center is x^2/2 + y^2/2.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import ThreeZoneSystem, normal_form_system


@dataclass(frozen=True)
class Scenario:
    name: str
    label: str
    left: tuple[float, float, float, float]
    right: tuple[float, float, float, float]
    zeros: int
    targets: tuple[float, ...]

    def system(self, **perturbations) -> ThreeZoneSystem:
        return normal_form_system(self.left, self.right, **perturbations)


SCENARIOS: dict[str, Scenario] = {s.name: s for s in (
    Scenario("scs-a", "SCS", (1.0, 1.0, 0.0, 2.0), (0.0, 1.0, 1.0, -2.0), 3, (0.2, 0.5, 0.8)),
    Scenario("scs-b", "SCS", (1.0, 1.0, 0.0, 1.0), (0.0, 1.0, 1.0, -2.0), 2, (0.3, 0.7)),
    Scenario("ccs-c", "CCS", (1.0, 2.0, -1.0, 1.0), (0.0, 1.0, 1.0, -2.0), 3, (0.2, 0.5, 0.8)),
    Scenario("ccs-d", "CCS", (1.0, 2.0, -1.0, -2.0), (0.0, 1.0, 1.0, -2.0), 3, (0.2, 0.5, 0.8)),
    Scenario("ccc-a", "CCC", (1.0, 2.0, -1.0, 1.0), (0.0, 1.0, -1.0, 0.0), 3, (0.5, 1.0, 2.0)),
    Scenario("ccc-b", "CCC", (1.0, 2.0, -1.0, -3.0), (0.0, 1.0, -1.0, 0.0), 3, (0.5, 1.0, 2.0)),
    Scenario("ccc-c", "CCC", (1.0, 2.0, -1.0, -3.0), (0.0, 1.0, -1.0, 2.0), 3, (0.5, 1.0, 2.0)),
)}

# printed Wronskian values: (h, value, absolute tolerance = half a unit in the last place)
WRONSKIAN_GOLDENS: dict[str, tuple[float, float, float]] = {
    "scs-a": (0.4, 9.16568, 5e-6),
    "scs-b": (0.4, -10.6955, 5e-5),
    "ccs-c": (0.4, 13.25, 5e-3),
    "ccs-d": (0.2, -4.26846, 5e-6),
    "ccc-a": (0.2, -2.92151, 5e-6),
    "ccc-b": (0.5, 7.2124, 5e-5),
    "ccc-c": (0.5, 7.2124, 5e-5),
}


def get(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
