#pragma once

#include <vector>

#include "thinspec/model.hpp"
#include "thinspec/state.hpp"

namespace thinspec {

// Brute-force reference: all 2^n_spins product states of an infinite-range
// bipartite antiferromagnet H = (2J/N) S_A.S_B + b (S_A^z - S_B^z), with the
// sublattices on even/odd site indices. Dense on purpose; capped at 12 spins.
struct FullSpinSystem {
  int n_spins = 0;
  double coupling_j = 1.0;
  double field_b = 0.0;
  Matrix hamiltonian;    // dense real symmetric, dimension 2^n_spins
  Vector staggered_diag; // diagonal of S_A^z - S_B^z in the product basis
};

FullSpinSystem build_full_system(int n_spins, double coupling_j, double field_b);

// Rows are the coupled states |S, m=0> of the maximal-sublattice-spin sector
// S_A = S_B = n_spins/4, S = 0..n_spins/2, built from symmetric sublattice
// (Dicke) states and Clebsch-Gordan coefficients. Shape (N/2+1) x 2^N.
Matrix sector_basis(int n_spins);

// Projects H0 and the staggered operator onto the thin-spectrum sector and
// returns the equivalent truncated model (energies relative to the singlet).
// Requires field_b == 0 and n_spins divisible by 4.
ThinSpectrumModel thin_sector_projection(const FullSpinSystem& system, int cutoff);

// Embed a thin-basis state into the full product space.
ComplexVector embed_thin_state(const FullSpinSystem& system, const QuantumState& thin_state);

// Evolve the full system under exp(-i t [H - E0 - i o (S_A^z - S_B^z)]) with
// per-step renormalization and compare <S_A^z - S_B^z>(t) against the
// thin-model trajectory; returns the maximum absolute deviation on the grid.
double full_evolution_check(const FullSpinSystem& system, const ThinSpectrumModel& thin_model,
                            double o, const std::vector<double>& t_grid,
                            const QuantumState& thin_initial);

// Lowest eigenpair of the full Hamiltonian (dense; meant for n_spins <= 8 in
// routine tests).
std::pair<double, Vector> full_ground_state(const FullSpinSystem& system);

// Dense matrix of S_total^2 in the product basis (test helper).
Matrix total_spin_squared(int n_spins);

// Largest |<S^z_tot(row)> - <S^z_tot(col)>| over nonzero H entries; zero when
// H commutes with total S^z.
double sz_conservation_violation(const FullSpinSystem& system);

}  // namespace thinspec
