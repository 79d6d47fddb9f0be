from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

import jostlab as jl

from oracles import dirichlet_free_eigs


def test_free_hamiltonian_spectrum_closed_form():
    # the discretized matrix must reproduce the exact eigenvalues of the
    # free Dirichlet second-difference operator
    grid = jl.SpatialGrid(-2.0, 2.0, 401)
    V = jl.build_potential(jl.PotentialSpec("zero", {}), grid)
    H = jl.discretize(V)
    evals = eigh_tridiagonal(H.diag, H.offdiag, eigvals_only=True)
    exact = np.sort(dirichlet_free_eigs(H.n, grid.h))
    # LAPACK backward error is eps * ||H||, not relative per eigenvalue
    assert np.max(np.abs(evals - exact)) < 1e-10 * np.max(exact)


def test_single_bound_state_counts(square_well, poschl_teller):
    for V in (square_well, poschl_teller):
        bs = jl.bound_states(jl.discretize(V))
        assert bs.count == 1
        assert bs.energies[0] < 0


def test_ground_state_energy_richardson():
    # E0 of the n=1 reflectionless well is -1; the discrete value carries an
    # O(h^2) defect, removed by Richardson extrapolation over two grids
    energies = {}
    for n in (2001, 4001):
        grid = jl.SpatialGrid(-40.0, 40.0, n)
        V = jl.build_potential(jl.PotentialSpec("poschl_teller", {"strength": 1}),
                               grid)
        energies[n] = jl.bound_states(jl.discretize(V)).energies[0]
    assert energies[4001] == pytest.approx(-1.0, abs=5e-3)
    extrap = (4 * energies[4001] - energies[2001]) / 3.0
    assert extrap == pytest.approx(-1.0, abs=5e-5)


def test_bound_state_l2_normalized(square_well):
    bs = jl.bound_states(jl.discretize(square_well))
    w = jl.trapezoid_weights(square_well.grid)
    assert np.sum(w * bs.states[:, 0] ** 2) == pytest.approx(1.0, abs=1e-6)


def test_evolution_at_zero_time_is_identity(square_well, shifted_gaussian):
    H = jl.discretize(square_well)
    res = jl.evolve_exact(H, shifted_gaussian, 0.0, project_ac=False)
    assert np.max(np.abs(res.u - shifted_gaussian)) < 1e-12
    assert res.method == "oracle"


def test_projection_idempotent(square_well, shifted_gaussian):
    H = jl.discretize(square_well)
    once = jl.evolve_exact(H, shifted_gaussian, 0.0, project_ac=True).u
    twice = jl.evolve_exact(H, once, 0.0, project_ac=True).u
    assert np.max(np.abs(twice - once)) < 1e-12
    assert jl.evolve_exact(H, shifted_gaussian, 0.0).diagnostics[
        "n_dropped"] == 1


def test_oracle_evolution_is_unitary(poschl_teller, shifted_gaussian):
    H = jl.discretize(poschl_teller)
    w = jl.trapezoid_weights(poschl_teller.grid)
    p0 = jl.evolve_exact(H, shifted_gaussian, 0.0, project_ac=True).u
    u = jl.evolve_exact(H, shifted_gaussian, 3.0, project_ac=True).u
    n0 = np.sqrt(np.sum(w * np.abs(p0) ** 2))
    nt = np.sqrt(np.sum(w * np.abs(u) ** 2))
    assert nt == pytest.approx(n0, rel=1e-10)


def test_many_times_match_single_calls(square_well, shifted_gaussian):
    H = jl.discretize(square_well)
    many = jl.evolve_exact_many(H, shifted_gaussian, [1.0, 2.0])
    for r in many:
        single = jl.evolve_exact(H, shifted_gaussian, r.t)
        assert np.max(np.abs(r.u - single.u)) == 0.0


def test_node_cap():
    grid = jl.SpatialGrid(-40.0, 40.0, 20001)
    V = jl.build_potential(jl.PotentialSpec("zero", {}), grid)
    with pytest.raises(jl.NumericalError):
        jl.discretize(V)
