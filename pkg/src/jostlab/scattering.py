"""Scattering coefficients, algebraic identities, and zero-energy classification.

From the Wronskians: alpha = W-tilde/(-2 i lam), beta = W/(-2 i lam),
T = 1/beta, R = alpha/beta, and the energy-conservation identity
|beta|^2 - |alpha|^2 = 1. Zero energy is classified by W(0): a resonance means
a bounded zero-energy solution exists, equivalently W(0) = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import HypothesisError, NearResonanceError, NumericalError
from .jost import solve_jost, wronskian_table
from .potentials import (PotentialSpec, SampledPotential, SpatialGrid,
                         build_potential, trapezoid_weights)

__all__ = ["ScatteringTable", "ResonanceReport", "scattering_table",
           "detect_resonance", "project_resonance", "scan_well_depths",
           "locate_resonant_depth"]

TOL_SCATTER_DEFAULT = 1e-6
TOL_RES_DEFAULT = 1e-6

_CSV_COLUMNS = ("lambda", "re_W", "im_W", "re_Wt", "im_Wt",
                "re_T", "im_T", "re_R", "im_R", "unitarity_defect")


@dataclass(frozen=True)
class ScatteringTable:
    """Per-lambda scattering data with identity defects."""

    lam: np.ndarray
    W: np.ndarray
    W_tilde: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    T: np.ndarray
    R: np.ndarray
    unitarity_defect: np.ndarray
    flagged: np.ndarray      # defect above tol_scatter
    failed: np.ndarray       # non-finite row (kept, never dropped)
    tol_scatter: float

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(_CSV_COLUMNS) + "\n")
            for i in range(self.lam.size):
                row = (self.lam[i], self.W[i].real, self.W[i].imag,
                       self.W_tilde[i].real, self.W_tilde[i].imag,
                       self.T[i].real, self.T[i].imag,
                       self.R[i].real, self.R[i].imag,
                       self.unitarity_defect[i])
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    def summary(self) -> str:
        ok = ~self.failed
        worst = float(np.max(self.unitarity_defect[ok])) if ok.any() else float("nan")
        return (f"rows={self.lam.size} failed={int(self.failed.sum())} "
                f"flagged={int(self.flagged.sum())} max_unitarity_defect={worst:.3e}")


@dataclass(frozen=True)
class ResonanceReport:
    """Zero-energy classification, with the normalized profile when resonant."""

    W0: complex
    classification: str                 # 'generic' | 'resonant'
    grid: SpatialGrid
    tol_effective: float
    alpha0: Optional[float] = None
    beta0: Optional[float] = None
    f0: Optional[np.ndarray] = None
    norm_check: Optional[float] = None


def scattering_table(V: SampledPotential, lam_grid,
                     tol_scatter: float = TOL_SCATTER_DEFAULT) -> ScatteringTable:
    """Build the scattering table over a grid of positive momenta.

    Parameters
    ----------
    V : SampledPotential
    lam_grid : array of floats, all > 0
    tol_scatter : float
        Rows whose unitarity defect exceeds this are flagged (not dropped).

    Returns
    -------
    ScatteringTable
    """
    lam = np.atleast_1d(np.asarray(lam_grid, dtype=float))
    if np.any(lam <= 0):
        raise ValueError("scattering_table requires lambda > 0")
    W, Wt = wronskian_table(V, lam)
    denom = -2j * lam
    alpha = Wt / denom
    beta = W / denom
    failed = ~(np.isfinite(W.real) & np.isfinite(W.imag)
               & np.isfinite(Wt.real) & np.isfinite(Wt.imag))
    beta_safe = np.where(failed | (beta == 0), 1.0, beta)
    T = 1.0 / beta_safe
    R = alpha / beta_safe
    defect = np.abs(np.abs(beta) ** 2 - np.abs(alpha) ** 2 - 1.0)
    flagged = (defect > tol_scatter) | failed
    return ScatteringTable(lam=lam, W=W, W_tilde=Wt, alpha=alpha, beta=beta,
                           T=T, R=R, unitarity_defect=defect, flagged=flagged,
                           failed=failed, tol_scatter=tol_scatter)


def _refined_copy(V: SampledPotential, target_n: int = 32001) -> SampledPotential:
    """Rebuild V from its spec on a refined grid (original nodes preserved)."""
    n = V.grid.n_points
    factor = max(1, int(np.ceil((target_n - 1) / (n - 1))))
    if factor == 1:
        return V
    return build_potential(V.spec, V.grid.refined(factor))


def detect_resonance(V: SampledPotential, tol_res: float = TOL_RES_DEFAULT,
                     refine_to: int = 32001) -> ResonanceReport:
    """Classify zero energy as generic or resonant via W(0).

    The zero-energy Volterra equation is regular, so W(0) is computed directly
    from the lambda = 0 sweeps. To keep discretization error out of the
    classification, the potential is rebuilt from its spec on an internally
    refined grid; the returned f0 is sampled back onto V's own grid.

    Parameters
    ----------
    V : SampledPotential
    tol_res : float
        Base tolerance; the effective threshold is tol_res * (1 + ||<x> V||_1).
    refine_to : int
        Approximate node count of the internal classification grid.

    Returns
    -------
    ResonanceReport
        classification = 'resonant' iff |W(0)| <= tau/10 where
        tau = tol_res * (1 + ||<x> V||_1); 'generic' iff |W(0)| >= 10 tau.
        Resonant reports carry alpha0, beta0, the normalized profile f0
        (sign fixed positive toward +infinity), and
        norm_check = f0(x_max)^2 + f0(x_min)^2 (exactly 2 in the limit).

    Raises
    ------
    NearResonanceError
        tau/10 < |W(0)| < 10 tau: the dead zone where neither decay theorem's
        hypothesis should be trusted.
    """
    Vf = _refined_copy(V, refine_to)
    tau = tol_res * (1.0 + V.norms[1])
    pair_grid = Vf.grid
    jp = solve_jost(Vf, 0.0, +1)
    jm = solve_jost(Vf, 0.0, -1)
    i0 = pair_grid.index_nearest(0.0)
    W0 = float((jp.m[i0] * jm.dm_dx[i0] - jp.dm_dx[i0] * jm.m[i0]).real)
    absW0 = abs(W0)
    if absW0 >= 10.0 * tau:
        return ResonanceReport(W0=complex(W0), classification="generic",
                               grid=V.grid, tol_effective=tau)
    if absW0 > tau / 10.0:
        raise NearResonanceError(
            f"|W(0)| = {absW0:.3e} inside the ambiguity band "
            f"({tau / 10.0:.3e}, {10.0 * tau:.3e}); refine the grid or nudge V")
    # resonant: f-(x, 0) is the bounded profile; c is its +infinity limit
    fm0 = jm.m.real
    c = float(fm0[-1])
    if abs(c) < 1e-8:
        raise NumericalError("degenerate zero-energy profile (vanishing +inf limit)")
    beta0 = 0.5 * (c + 1.0 / c)
    alpha0 = 0.5 * (c - 1.0 / c)
    scale = np.sqrt((1.0 + c * c) / 2.0)
    f0_fine = fm0 / scale
    if f0_fine[-1] < 0:
        f0_fine = -f0_fine
    stride = (pair_grid.n_points - 1) // (V.grid.n_points - 1)
    f0 = f0_fine[::stride].copy()
    norm_check = float(f0[-1] ** 2 + f0[0] ** 2)
    return ResonanceReport(W0=complex(W0), classification="resonant",
                           grid=V.grid, tol_effective=tau, alpha0=alpha0,
                           beta0=beta0, f0=f0, norm_check=norm_check)


def project_resonance(psi: np.ndarray, report: ResonanceReport) -> np.ndarray:
    """Rank-one projection <psi, f0> f0 by trapezoid quadrature (f0 is real)."""
    if report.classification != "resonant":
        raise HypothesisError("project_resonance requires a resonant report")
    w = trapezoid_weights(report.grid)
    coef = np.sum(w * psi * np.conj(report.f0))
    return coef * report.f0.astype(complex)


def _well_W0(depth: float, halfwidth: float, grid: SpatialGrid) -> float:
    spec = PotentialSpec("square_well", {"depth": float(depth),
                                         "halfwidth": float(halfwidth)})
    V = build_potential(spec, grid)
    jp = solve_jost(V, 0.0, +1)
    jm = solve_jost(V, 0.0, -1)
    i0 = grid.index_nearest(0.0)
    return float((jp.m[i0] * jm.dm_dx[i0] - jp.dm_dx[i0] * jm.m[i0]).real)


def scan_well_depths(depths, halfwidth: float, grid: SpatialGrid,
                     tol_res: float = TOL_RES_DEFAULT):
    """|W(0)| versus square-well depth, with per-row classification labels.

    Scan rows never raise on ambiguity; rows in the dead zone are labeled
    'near-resonant' so the caller can see the dip structure.
    """
    depths = np.atleast_1d(np.asarray(depths, dtype=float))
    rows = []
    for d in depths:
        W0 = _well_W0(d, halfwidth, grid)
        spec = PotentialSpec("square_well", {"depth": float(d),
                                             "halfwidth": float(halfwidth)})
        V = build_potential(spec, grid)
        tau = tol_res * (1.0 + V.norms[1])
        a = abs(W0)
        label = ("resonant" if a <= tau / 10.0
                 else "generic" if a >= 10.0 * tau else "near-resonant")
        rows.append((float(d), W0, label))
    return rows


def locate_resonant_depth(halfwidth: float, depth_lo: float, depth_hi: float,
                          grid: SpatialGrid, xtol: float = 1e-10) -> float:
    """Bisection for the depth where W(0) crosses zero (a resonance).

    Requires W(0) to change sign across [depth_lo, depth_hi].
    """
    f_lo = _well_W0(depth_lo, halfwidth, grid)
    f_hi = _well_W0(depth_hi, halfwidth, grid)
    if f_lo * f_hi >= 0:
        raise HypothesisError("bracket does not straddle a zero of W(0)")
    return float(brentq(lambda d: _well_W0(d, halfwidth, grid),
                        depth_lo, depth_hi, xtol=xtol))
