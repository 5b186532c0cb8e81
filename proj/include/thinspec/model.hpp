#pragma once

#include <Eigen/Dense>

#include "thinspec/state.hpp"

namespace thinspec {

enum class ModelKind { Ladder, LiebMattis };

// Truncated thin-spectrum model: diagonal tower energies E_n (units of J,
// relative to E_0) plus the order-parameter matrix O in the same basis.
// Both built-in kinds share E_n = J n(n+1)/N; they differ in the matrix
// elements of O (constant N/4 for the generic ladder, exact total-spin
// coupling elements for the Lieb-Mattis antiferromagnet).
struct ThinSpectrumModel {
  int n_particles = 0;     // N, number of microscopic spins
  int cutoff = 0;          // retained levels, basis indices 0..cutoff-1
  double coupling_j = 1.0; // J
  Vector energies;         // size cutoff, non-decreasing, energies[0] == 0
  Matrix order_param;      // cutoff x cutoff, real symmetric, zero diagonal
  ModelKind kind = ModelKind::Ladder;
};

// Generic thin-spectrum ladder: E_n = J n(n+1)/N, O_{n,n+1} = N/4.
ThinSpectrumModel build_ladder_model(int n_particles, int cutoff, double coupling_j);

// Lieb-Mattis antiferromagnet sector S_A = S_B = N/4, m = 0:
// E_n = (J/N) n(n+1) relative to the singlet, O elements from
// staggered_order_element(). Requires n_particles divisible by 4 and
// cutoff <= N/2 + 1 (the sector size).
ThinSpectrumModel build_lieb_mattis_model(int n_particles, int cutoff, double coupling_j);

// The n = 0 basis state (total-spin singlet).
QuantumState symmetric_ground_state(const ThinSpectrumModel& model);

struct EquilibriumResult {
  QuantumState state;
  double energy = 0.0;             // lowest eigenvalue of H0 + b O
  double order_expectation = 0.0;  // <O> in the ground state
  bool truncation_warning = false; // weight on top 10% of levels > 1e-6
};

// Ground state of H0 + b*O on the truncated basis, b >= 0. The favoured
// branch has negative <O>. Phase fixed so the n = 0 amplitude is real and
// non-negative. Never silently truncates: the result carries a warning flag
// when the wavepacket weight on the top 10% of retained levels exceeds 1e-6.
EquilibriumResult broken_ground_state(const ThinSpectrumModel& model, double field_b);

// Same computation for a signed field coefficient c (used for the mirrored
// branch at -b); broken_ground_state forwards here.
EquilibriumResult ground_state_with_field(const ThinSpectrumModel& model, double field_c);

// <psi|O|psi>; the imaginary residue is checked to be < 1e-12 and dropped.
double order_parameter_expectation(const ThinSpectrumModel& model, const QuantumState& state);

}  // namespace thinspec
