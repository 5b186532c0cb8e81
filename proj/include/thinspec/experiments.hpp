#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "thinspec/dynamics.hpp"
#include "thinspec/model.hpp"

namespace thinspec {

// A pair of symmetry-broken branch states. `left` is the branch favoured by
// the non-unitary field (negative <O>, amplified under K); `right` is its
// parity mirror.
struct BranchPair {
  QuantumState left;
  QuantumState right;
  double overlap_sq = 0.0;  // |<L|R>|^2
};

// Branches as the extremal growth/decay modes of K = H0 - i o O: L is the
// dominant mode, R = D conj(L) with D = diag((-1)^n) is the exact mode with
// conjugate eigenvalue (most strongly decaying). These are the asymptotic
// attractor/repeller of the renormalized flow, so overlap thresholds close
// to 1 are reachable against L. Fails when the two branches are not
// distinct (non-unitary coupling below the spectral reality threshold).
BranchPair mode_branch_states(const ThinSpectrumModel& model, double o);

// Equilibrium wavepacket branches: ground states of H0 +- b_ref O with
// b_ref = kappa_ref (E1 - E0) / (N/4). Requires near-orthogonality
// |<L|R>|^2 < 1e-6.
BranchPair equilibrium_branch_states(const ThinSpectrumModel& model, double kappa_ref);

// sqrt(w) L + sqrt(1-w) R, renormalized.
QuantumState weighted_cat(const BranchPair& branches, double weight_left);

struct ScalingScanResult {
  std::vector<double> x_values;  // N (or o for the dual scan)
  std::vector<double> collapse_times;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double fit_r_squared = 0.0;
};

struct ScanOptions {
  ModelKind kind = ModelKind::Ladder;
  int cutoff = 64;
  double coupling_j = 1.0;
  double threshold = 0.99;
  int threads = 1;
};

// Collapse time of the equal-weight mode cat vs N at fixed o, with a
// log-log fit. Any point that fails to collapse raises ExperimentError
// naming the (N, o) pair.
ScalingScanResult scaling_scan(const std::vector<int>& n_values, double o,
                               const ScanOptions& options = {});

// Dual scan in o at fixed N.
ScalingScanResult scaling_scan_in_o(int n_particles, const std::vector<double>& o_values,
                                    const ScanOptions& options = {});

enum class OverlapClass { FiniteOverlap, ZeroOverlap };

struct RegimeStudyResult {
  std::vector<int> n_values;
  std::vector<double> selection_delays;  // first time |<L|psi>|^2 >= 0.5
  OverlapClass overlap_class = OverlapClass::FiniteOverlap;
};

struct RegimeOptions {
  ModelKind kind = ModelKind::Ladder;
  int cutoff = 64;
  double coupling_j = 1.0;
  double finite_overlap_weight = 0.25;  // initial L weight for class (a)
  double delay_threshold = 0.5;
  double horizon_factor = 1e4;  // horizon = factor / (N o)
  int threads = 1;
};

// Selection delays for (a) a finite-overlap cat and (b) the orthogonal
// complement of the favoured branch within span{L, R} (|<L|psi0>|^2 <= 1e-12
// verified).
std::pair<RegimeStudyResult, RegimeStudyResult> regime_study(const std::vector<int>& n_values,
                                                             double o,
                                                             const RegimeOptions& options = {});

enum class FieldStrategy { MartingaleBias, SymmetricFlip };

struct BornEnsembleResult {
  long trials = 0;
  double weight_initial = 0.0;
  double frequency_l = 0.0;   // empirical L fraction among absorbed trials
  double ci_halfwidth = 0.0;  // 3 sqrt(f(1-f)/trials)
  FieldStrategy strategy = FieldStrategy::MartingaleBias;
  long non_absorbed = 0;      // trials alive at the step cap (reported separately)
  long clamped_steps = 0;     // martingale probability clamps (diagnostic)
};

struct BornOptions {
  int cutoff = 48;
  double coupling_j = 1.0;
  double kappa_ref = 50.0;       // equilibrium branch field, units of (E1-E0)/(N/4)
  double dt_factor = 0.1;        // resampling interval = dt_factor/(N o)
  double absorb_threshold = 0.999;  // on the relative branch weight
  long max_steps = 40000;
  int threads = 1;
};

// Stochastic-field ensemble. The field sign is resampled every dt:
// MartingaleBias picks the sign favouring L with the unique probability that
// makes the relative branch weight w = p_L/(p_L+p_R) a martingale step by
// step (so absorbed frequencies reproduce the initial weight by optional
// stopping); SymmetricFlip picks each sign with probability 1/2.
BornEnsembleResult born_ensemble(double weight_initial, long trials, double o, ModelKind kind,
                                 int n_particles, FieldStrategy strategy, std::uint64_t seed,
                                 const BornOptions& options = {});

struct EnergyDriftResult {
  std::vector<int> n_values;
  std::vector<double> max_drifts;  // max |<H0>(t) - <H0>(0)| over the horizon
  std::vector<double> tau_values;  // measured collapse time per N
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double fit_r_squared = 0.0;
};

struct DriftOptions {
  ModelKind kind = ModelKind::Ladder;
  int cutoff = 64;
  double coupling_j = 1.0;
  double kappa_ref = 1000.0;  // equilibrium cat preparation
  double horizon_tau_mult = 3.0;
  int n_samples = 301;
  double threshold = 0.99;  // for the tau measurement
  std::optional<double> absolute_horizon;  // required when o = 0
  int threads = 1;
};

// Max energy drift of the equilibrium cat over a fixed multiple of the
// measured collapse time tau(N), with a log-log fit of drift vs N.
EnergyDriftResult energy_drift_scan(const std::vector<int>& n_values, double o,
                                    const DriftOptions& options = {});

struct EquilibriumScanRow {
  double b = 0.0;
  double n_times_b = 0.0;
  double order_norm = 0.0;  // <O> / (N/4) in the broken ground state
  bool truncation_warning = false;
};

struct EquilibriumScanTable {
  int n_particles = 0;
  std::vector<EquilibriumScanRow> rows;
};

EquilibriumScanTable equilibrium_order_scan(int n_particles, const std::vector<double>& b_values,
                                            ModelKind kind, int cutoff, double coupling_j = 1.0);

struct EquilibriumCollapseResult {
  std::vector<EquilibriumScanTable> tables;  // one per N, at matched N*b grid
  double max_spread = 0.0;  // max over the N*b grid of the vertical spread
};

// Runs equilibrium_order_scan for each N at b = (N*b)/N and reports the
// maximum vertical spread of the normalized order parameter across N.
EquilibriumCollapseResult equilibrium_collapse(const std::vector<int>& n_values,
                                               const std::vector<double>& nb_values, ModelKind kind,
                                               int cutoff, double coupling_j = 1.0);

ThinSpectrumModel build_model(ModelKind kind, int n_particles, int cutoff, double coupling_j);

}  // namespace thinspec
