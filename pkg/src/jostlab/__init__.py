"""Numerical laboratory for -d^2/dx^2 + V on the line: Jost solutions,
scattering coefficients, zero-energy resonance detection, absolutely
continuous evolution, and dispersive-decay rate verification.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import (BornDivergenceError, HypothesisError, NearResonanceError,
                     NumericalError, QuadratureBudgetError)
from .potentials import (DEFAULT_GRID, PotentialSpec, SampledPotential,
                         SpatialGrid, build_potential, gaussian_packet,
                         tail_mass, trapezoid_weights, weighted_norm)
from .jost import JostSolution, WronskianPair, ode_residual, solve_jost, \
    wronskian_table, wronskians
from .scattering import (ResonanceReport, ScatteringTable, detect_resonance,
                         locate_resonant_depth, project_resonance,
                         scan_well_depths, scattering_table)
from .oracle import (BoundStateSet, DiscreteHamiltonian, bound_states,
                     discretize, evolve_exact, evolve_exact_many)
from .propagator import (BornResult, CutoffSpec, EvolutionResult,
                         born_resolvent, evolve_ac, evolve_ac_many,
                         free_evolve, resolvent_form, resolvent_kernel,
                         resonance_leading_term)
from .analysis import (DecayFit, SLOPE_TOL_DEFAULT, T_SAMPLES_DEFAULT,
                       VerificationResult, fit_decay, verify_resonance,
                       verify_transport, weighted_sup_norm)

__all__ = [
    "__version__",
    "NumericalError", "QuadratureBudgetError", "HypothesisError",
    "NearResonanceError", "BornDivergenceError",
    "SpatialGrid", "PotentialSpec", "SampledPotential", "build_potential",
    "gaussian_packet", "weighted_norm", "tail_mass", "trapezoid_weights",
    "DEFAULT_GRID",
    "JostSolution", "WronskianPair", "solve_jost", "wronskians",
    "wronskian_table", "ode_residual",
    "ScatteringTable", "ResonanceReport", "scattering_table",
    "detect_resonance", "project_resonance", "scan_well_depths",
    "locate_resonant_depth",
    "DiscreteHamiltonian", "BoundStateSet", "discretize", "bound_states",
    "evolve_exact", "evolve_exact_many",
    "CutoffSpec", "EvolutionResult", "BornResult", "free_evolve",
    "resolvent_kernel", "resolvent_form", "born_resolvent", "evolve_ac",
    "evolve_ac_many", "resonance_leading_term",
    "DecayFit", "VerificationResult", "weighted_sup_norm", "fit_decay",
    "verify_transport", "verify_resonance", "T_SAMPLES_DEFAULT",
    "SLOPE_TOL_DEFAULT",
]
