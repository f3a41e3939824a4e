"""Unitary lattice gauge theory with discrete-time quantum walks.

The package evolves a two-component field on a (1+1)-dimensional lattice
with a unitary walk, evaluates the equivalent lattice actions and their
Noether currents, couples the walk to a U(1) gauge field and advances that
field with the real-time lattice Maxwell equations.
"""

from .errors import ConfigError, ConstraintError, SaturationError
from .lattice import (
    FieldHistory,
    LatticeSpec,
    gaussian_packet,
    inner,
    lattice_derivative,
    laplacian,
    norm,
    plane_wave,
    translate,
)
from .dirac_walk import (
    InternalAlgebra,
    WalkOperator,
    amplification_spectrum,
    build_dirac_walk,
    dispersion,
    evolve,
    local_hamiltonian,
    mu_eps,
    two_step_evolve,
    two_step_residual,
    walk_step,
)
from .gauge import GaugeField, GaugeTransformation, gauged_walk_step
from .actions import ActionValue, LagrangianDensity, action_asymmetric, action_symmetric, boundary_terms
from .noether import CurrentField, InternalTransformation, closed_form_u1_current, noether_current_numeric
from .maxwell import GaugeLattice, coupled_evolve, gauge_action

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConstraintError", "SaturationError",
    "LatticeSpec", "FieldHistory", "translate", "lattice_derivative", "laplacian", "inner", "norm",
    "plane_wave", "gaussian_packet",
    "InternalAlgebra", "WalkOperator", "mu_eps", "build_dirac_walk", "walk_step", "evolve",
    "two_step_evolve", "two_step_residual",
    "local_hamiltonian", "dispersion", "amplification_spectrum",
    "GaugeField", "GaugeTransformation", "gauged_walk_step",
    "ActionValue", "LagrangianDensity", "action_asymmetric", "action_symmetric", "boundary_terms",
    "CurrentField", "InternalTransformation", "closed_form_u1_current", "noether_current_numeric",
    "GaugeLattice", "gauge_action", "coupled_evolve",
]
