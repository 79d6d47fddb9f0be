"""Exception taxonomy shared across the package.

The CLI maps these onto its exit-code contract: usage/config errors exit 1,
numerical failures exit 2, hypothesis violations exit 3.
"""
from __future__ import annotations


class NumericalError(RuntimeError):
    """A computation failed numerically (solver breakdown, budget exhaustion)."""


class QuadratureBudgetError(NumericalError):
    """An oscillatory integral would need more nodes than the configured budget."""


class HypothesisError(ValueError):
    """Inputs violate the mathematical hypotheses of the requested operation."""


class NearResonanceError(HypothesisError):
    """Zero-energy classification is ambiguous: |W(0)| sits inside the dead zone
    where discretization error could flip the generic/resonant verdict."""


class BornDivergenceError(HypothesisError):
    """Born series requested outside its convergence region 2|lambda| >= ||V||_1."""
