#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "thinspec/model.hpp"
#include "thinspec/state.hpp"

namespace thinspec {

enum class Backend { DenseEigen, ScalingSquaring, SteppedIntegration };

struct PropagatorConfig {
  double field_strength_o = 0.0;  // o >= 0, units of J
  double time_step = 0.1;        // units of hbar/J; bracket seed and substep cap
  double rel_tolerance = 1e-10;  // per-evaluation relative error budget, in (0, 1e-4]
  Backend backend = Backend::DenseEigen;

  void validate() const;
};

// Non-unitary generator K = diag(E_n) - i o O. Complex symmetric: K == K^T.
ComplexMatrix generator(const ThinSpectrumModel& model, double o);

// Eigendecomposition of K with overflow-safe renormalized evaluation of
// exp(-i t K) psi at arbitrary t. Residuals ||K v - lambda v|| are verified
// against 1e-10 ||K||_F on construction. Eigenvectors of a complex-symmetric
// K are not orthogonal; coefficients come from a LU solve, not adjoints.
class SpectralPropagator {
 public:
  SpectralPropagator(const Vector& energies, const Matrix& coupling);
  explicit SpectralPropagator(const ComplexMatrix& k);

  // Renormalized state and log ||exp(-i t K) psi0|| (exact up to tolerance).
  std::pair<ComplexVector, double> evaluate(const ComplexVector& psi0, double t) const;

  // Eigenvalues sorted by descending growth rate Im(lambda).
  const ComplexVector& eigenvalues() const { return lam_; }
  const ComplexMatrix& eigenvectors() const { return vecs_; }
  double max_growth_rate() const { return gmax_; }

 private:
  ComplexVector lam_;   // growth-sorted
  ComplexMatrix vecs_;  // columns match lam_
  Eigen::PartialPivLU<ComplexMatrix> lu_;
  double gmax_ = 0.0;
};

// Apply exp(-i t K) and renormalize; returns the state and the raw norm
// ||exp(-i t K) psi0||. Single-shot backends (DenseEigen, ScalingSquaring)
// refuse o * t * max|O| > 500; SteppedIntegration renormalizes per substep
// and only fails if the final raw norm itself is not representable.
std::pair<QuantumState, double> propagate(const QuantumState& state,
                                          const ThinSpectrumModel& model,
                                          const PropagatorConfig& config, double t);

struct TrajectoryRecord {
  Vector times;
  Vector log_raw_norm;  // accumulated log ||U(t) psi0||; raw norm may overflow double
  Vector energy;        // <H0> on the renormalized state
  Vector order_param;   // <O> on the renormalized state
  std::optional<std::pair<Vector, Vector>> branch_overlaps;  // squared overlaps

  double raw_norm(Eigen::Index i) const { return std::exp(log_raw_norm[i]); }
};

// Observables along t_grid (starting at 0, strictly increasing), stepping
// grid point to grid point with per-step renormalization.
TrajectoryRecord evolve_trajectory(const QuantumState& state, const ThinSpectrumModel& model,
                                   const PropagatorConfig& config, const std::vector<double>& t_grid,
                                   const std::optional<std::pair<QuantumState, QuantumState>>& branches = std::nullopt);

struct DominantMode {
  QuantumState mode;
  double growth_rate = 0.0;  // Im(lambda) in units of J/hbar
};

// Eigenvector of K = diag(E) - i o O with the largest growth rate. Errors
// out when the two leading growth rates agree to 1e-9 relative (caller
// should perturb o).
DominantMode dominant_mode(const ThinSpectrumModel& model, double o);

// Same for an arbitrary symmetric coupling: K = diag(energies) - i coupling.
DominantMode dominant_mode_general(const Vector& energies, const Matrix& coupling);

struct PerturbationSplit {
  double o_parallel = 0.0;
  Matrix remainder;  // orthogonal to O under the entrywise inner product
};

// Decompose a symmetric perturbation P = o_parallel * O + R with <R, O> = 0.
PerturbationSplit project_perturbation(const Matrix& perturbation, const ThinSpectrumModel& model);

// First grid-refined time at which |<target|psi(t)>|^2 exceeds threshold,
// located by bracket doubling from config.time_step plus bisection to 1e-6
// relative precision. None if the threshold is not reached by the horizon
// (default 1e3 hbar/(N o) for o > 0; o = 0 requires an explicit horizon).
std::optional<double> collapse_time(const QuantumState& state, const ThinSpectrumModel& model,
                                    const PropagatorConfig& config, const QuantumState& target,
                                    double threshold,
                                    std::optional<double> horizon = std::nullopt);

// Same search without the (0.5, 1) threshold restriction; used for the
// regime-study selection delays at threshold 0.5.
std::optional<double> first_crossing_time(const QuantumState& state, const ThinSpectrumModel& model,
                                          double o, const QuantumState& target, double threshold,
                                          double time_step, double horizon);

}  // namespace thinspec
