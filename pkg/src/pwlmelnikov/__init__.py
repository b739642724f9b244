"""Melnikov analysis of three-zone piecewise-linear Hamiltonian systems."""
from .errors import *  # noqa: F401,F403
from .model import (  # noqa: F401
    Side, ZoneHamiltonian, ZonePerturbation, ThreeZoneSystem, normal_form_system,
    classify_zone, classify_system, check_hypotheses, tangent_points, reflect,
)
from .normal_form import to_normal_form, verify_normal_form  # noqa: F401
from .unperturbed import annulus_interval, crossing_quad, orbit_arcs, separatrix_points  # noqa: F401
from .melnikov import (  # noqa: F401
    BasisFunction, MelnikovForm, eval_basis, eval_melnikov, melnikov_coefficients, melnikov_oracle,
)

__version__ = "0.1.0"
