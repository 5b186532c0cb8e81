#include "thinspec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "thinspec/errors.hpp"
#include "thinspec/fitting.hpp"
#include "thinspec/parallel.hpp"

namespace thinspec {

namespace {

// Bracket seed for the first-crossing search, in units of hbar/(N o).
constexpr double kTimeStepFactor = 0.01;
// Degenerate-cat guard for mode branches: below the spectral reality
// threshold L and R stop being distinct and an equal-weight cat is
// meaningless.
constexpr double kModeBranchOverlapCap = 1e-3;

std::string point_label(int n, double o) {
  std::ostringstream s;
  s << "(N = " << n << ", o = " << o << ")";
  return s.str();
}

void require_scan_grid(std::size_t n_entries, double x_min, double x_max, const char* what) {
  if (n_entries < 4) {
    throw std::invalid_argument(std::string(what) + ": need at least 4 grid entries");
  }
  if (!(x_max >= 4.0 * x_min)) {
    throw std::invalid_argument(std::string(what) + ": grid must span at least 2 octaves");
  }
}

double mode_cat_collapse_time(const ThinSpectrumModel& model, double o, double threshold) {
  BranchPair branches = mode_branch_states(model, o);
  const QuantumState cat = weighted_cat(branches, 0.5);
  PropagatorConfig config;
  config.field_strength_o = o;
  config.time_step = kTimeStepFactor / (model.n_particles * o);
  const auto tau = collapse_time(cat, model, config, branches.left, threshold);
  if (!tau) {
    throw ExperimentError("collapse_time returned none at " + point_label(model.n_particles, o));
  }
  return *tau;
}

ComplexMatrix step_propagator(const ThinSpectrumModel& model, double o, double dt) {
  return (Complex(0.0, -dt) * generator(model, o)).exp();
}

// Stateless per-(trial, step) uniform in [0,1); schedule-independent.
double trial_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t step) {
  const std::uint64_t bits = mix_seed(mix_seed(seed, trial), step);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

ThinSpectrumModel build_model(ModelKind kind, int n_particles, int cutoff, double coupling_j) {
  return kind == ModelKind::Ladder ? build_ladder_model(n_particles, cutoff, coupling_j)
                                   : build_lieb_mattis_model(n_particles, cutoff, coupling_j);
}

BranchPair mode_branch_states(const ThinSpectrumModel& model, double o) {
  DominantMode dom = [&] {
    try {
      return dominant_mode(model, o);
    } catch (const DegeneracyError& e) {
      throw ExperimentError(std::string(e.what()) + " at " + point_label(model.n_particles, o));
    }
  }();
  const ComplexVector& l = dom.mode.amplitudes();
  ComplexVector r(l.size());
  for (Eigen::Index n = 0; n < l.size(); ++n) {
    r[n] = (n % 2 == 0 ? 1.0 : -1.0) * std::conj(l[n]);
  }
  BranchPair pair{dom.mode, QuantumState(std::move(r), true), 0.0};
  pair.overlap_sq = pair.left.squared_overlap(pair.right);
  if (pair.overlap_sq > kModeBranchOverlapCap) {
    std::ostringstream msg;
    msg << "branch states degenerate (|<L|R>|^2 = " << pair.overlap_sq
        << "): non-unitary coupling below the spectral reality threshold at "
        << point_label(model.n_particles, o);
    throw ExperimentError(msg.str());
  }
  return pair;
}

BranchPair equilibrium_branch_states(const ThinSpectrumModel& model, double kappa_ref) {
  if (!(kappa_ref > 0.0)) throw std::invalid_argument("kappa_ref must be > 0");
  const double spacing = model.energies[1] - model.energies[0];
  const double b_ref = kappa_ref * spacing / (model.n_particles / 4.0);
  EquilibriumResult left = ground_state_with_field(model, b_ref);
  EquilibriumResult right = ground_state_with_field(model, -b_ref);
  BranchPair pair{left.state, right.state, 0.0};
  pair.overlap_sq = pair.left.squared_overlap(pair.right);
  if (pair.overlap_sq >= 1e-6) {
    std::ostringstream msg;
    msg << "equilibrium branches not orthogonal enough: |<L|R>|^2 = " << pair.overlap_sq
        << " at kappa_ref = " << kappa_ref << ", N = " << model.n_particles;
    throw ExperimentError(msg.str());
  }
  if (left.truncation_warning || right.truncation_warning) {
    throw ExperimentError("equilibrium branch wavepacket leaks into the top 10% of retained levels; "
                          "increase cutoff");
  }
  return pair;
}

QuantumState weighted_cat(const BranchPair& branches, double weight_left) {
  if (weight_left < 0.0 || weight_left > 1.0) {
    throw std::invalid_argument("weight_left must lie in [0, 1]");
  }
  ComplexVector v = std::sqrt(weight_left) * branches.left.amplitudes() +
                    std::sqrt(1.0 - weight_left) * branches.right.amplitudes();
  return QuantumState(std::move(v), true);
}

ScalingScanResult scaling_scan(const std::vector<int>& n_values, double o,
                               const ScanOptions& options) {
  if (!(o > 0.0)) throw std::invalid_argument("scaling_scan requires o > 0");
  if (n_values.empty()) throw std::invalid_argument("scaling_scan: empty N grid");
  const auto [mn, mx] = std::minmax_element(n_values.begin(), n_values.end());
  require_scan_grid(n_values.size(), static_cast<double>(*mn), static_cast<double>(*mx),
                    "scaling_scan");

  ScalingScanResult result;
  result.x_values.resize(n_values.size());
  result.collapse_times.resize(n_values.size());
  parallel_for(n_values.size(), options.threads, [&](std::size_t i) {
    const ThinSpectrumModel model =
        build_model(options.kind, n_values[i], options.cutoff, options.coupling_j);
    result.x_values[i] = n_values[i];
    result.collapse_times[i] = mode_cat_collapse_time(model, o, options.threshold);
  });

  const LinearFit fit = log_log_fit(result.x_values, result.collapse_times);
  result.fit_slope = fit.slope;
  result.fit_intercept = fit.intercept;
  result.fit_r_squared = fit.r_squared;
  return result;
}

ScalingScanResult scaling_scan_in_o(int n_particles, const std::vector<double>& o_values,
                                    const ScanOptions& options) {
  if (o_values.empty()) throw std::invalid_argument("scaling_scan_in_o: empty o grid");
  const auto [mn, mx] = std::minmax_element(o_values.begin(), o_values.end());
  require_scan_grid(o_values.size(), *mn, *mx, "scaling_scan_in_o");

  ScalingScanResult result;
  result.x_values = o_values;
  result.collapse_times.resize(o_values.size());
  parallel_for(o_values.size(), options.threads, [&](std::size_t i) {
    const ThinSpectrumModel model =
        build_model(options.kind, n_particles, options.cutoff, options.coupling_j);
    result.collapse_times[i] = mode_cat_collapse_time(model, o_values[i], options.threshold);
  });

  const LinearFit fit = log_log_fit(result.x_values, result.collapse_times);
  result.fit_slope = fit.slope;
  result.fit_intercept = fit.intercept;
  result.fit_r_squared = fit.r_squared;
  return result;
}

std::pair<RegimeStudyResult, RegimeStudyResult> regime_study(const std::vector<int>& n_values,
                                                             double o,
                                                             const RegimeOptions& options) {
  if (!(o > 0.0)) throw std::invalid_argument("regime_study requires o > 0");
  if (n_values.size() < 2) throw std::invalid_argument("regime_study: need at least 2 N values");

  RegimeStudyResult finite{n_values, std::vector<double>(n_values.size()),
                           OverlapClass::FiniteOverlap};
  RegimeStudyResult zero{n_values, std::vector<double>(n_values.size()), OverlapClass::ZeroOverlap};

  parallel_for(n_values.size(), options.threads, [&](std::size_t i) {
    const int n = n_values[i];
    const ThinSpectrumModel model = build_model(options.kind, n, options.cutoff, options.coupling_j);
    const BranchPair branches = mode_branch_states(model, o);

    const QuantumState psi_a = weighted_cat(branches, options.finite_overlap_weight);

    // Orthogonal complement of L within span{L, R}.
    const Complex lr = branches.left.overlap(branches.right);
    ComplexVector vb = branches.right.amplitudes() - lr * branches.left.amplitudes();
    const QuantumState psi_b(std::move(vb), true);
    if (psi_b.squared_overlap(branches.left) > 1e-12) {
      throw ExperimentError("zero-overlap construction failed at " + point_label(n, o));
    }

    const double time_step = kTimeStepFactor / (n * o);
    const double horizon = options.horizon_factor / (n * o);
    for (auto [psi, result] : {std::pair{&psi_a, &finite}, std::pair{&psi_b, &zero}}) {
      const auto delay = first_crossing_time(*psi, model, o, branches.left,
                                             options.delay_threshold, time_step, horizon);
      if (!delay) {
        throw ExperimentError("selection delay not reached by the horizon at " + point_label(n, o));
      }
      result->selection_delays[i] = *delay;
    }
  });
  return {finite, zero};
}

BornEnsembleResult born_ensemble(double weight_initial, long trials, double o, ModelKind kind,
                                 int n_particles, FieldStrategy strategy, std::uint64_t seed,
                                 const BornOptions& options) {
  if (weight_initial < 0.0 || weight_initial > 1.0) {
    throw std::invalid_argument("weight_initial must lie in [0, 1]");
  }
  if (trials < 1000) throw std::invalid_argument("born_ensemble: trials must be >= 1000");
  if (!(o > 0.0)) throw std::invalid_argument("born_ensemble requires o > 0");

  const ThinSpectrumModel model = build_model(kind, n_particles, options.cutoff, options.coupling_j);
  const BranchPair branches = equilibrium_branch_states(model, options.kappa_ref);
  const double dt = options.dt_factor / (n_particles * o);
  const ComplexMatrix u_plus = step_propagator(model, o, dt);    // favours L
  const ComplexMatrix u_minus = step_propagator(model, -o, dt);  // favours R

  const ComplexVector l = branches.left.amplitudes();
  const ComplexVector r = branches.right.amplitudes();
  const ComplexVector psi0 = weighted_cat(branches, weight_initial).amplitudes();
  const double w_hi = options.absorb_threshold;
  const double w_lo = 1.0 - options.absorb_threshold;

  auto branch_weight = [&](const ComplexVector& psi) {
    const double pl = std::norm(l.dot(psi));
    const double pr = std::norm(r.dot(psi));
    return pl / (pl + pr);
  };

  std::vector<signed char> outcome(trials, -1);  // 1 = L, 0 = R, -1 = not absorbed
  std::vector<long> clamp_count(trials, 0);

  parallel_for(static_cast<std::size_t>(trials), options.threads, [&](std::size_t trial) {
    ComplexVector psi = psi0;
    double w = branch_weight(psi);
    for (long step = 0; step < options.max_steps; ++step) {
      if (w >= w_hi) { outcome[trial] = 1; return; }
      if (w <= w_lo) { outcome[trial] = 0; return; }
      ComplexVector cand_p = u_plus * psi;
      cand_p /= cand_p.norm();
      ComplexVector cand_m = u_minus * psi;
      cand_m /= cand_m.norm();
      const double wp = branch_weight(cand_p);
      const double wm = branch_weight(cand_m);
      double p = 0.5;
      if (strategy == FieldStrategy::MartingaleBias) {
        const double denom = wp - wm;
        if (std::abs(denom) > 1e-15) {
          p = (w - wm) / denom;
          if (p < 0.0 || p > 1.0) {
            ++clamp_count[trial];
            p = std::clamp(p, 0.0, 1.0);
          }
        }
      }
      const bool pick_plus =
          trial_uniform(seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(step)) < p;
      psi = pick_plus ? std::move(cand_p) : std::move(cand_m);
      w = pick_plus ? wp : wm;
    }
  });

  BornEnsembleResult result;
  result.trials = trials;
  result.weight_initial = weight_initial;
  result.strategy = strategy;
  long absorbed = 0, left_count = 0;
  for (long i = 0; i < trials; ++i) {
    if (outcome[i] >= 0) { ++absorbed; left_count += outcome[i]; }
    result.clamped_steps += clamp_count[i];
  }
  result.non_absorbed = trials - absorbed;
  if (result.non_absorbed * 100 > trials) {
    std::ostringstream msg;
    msg << "born_ensemble: " << result.non_absorbed << "/" << trials
        << " trials not absorbed at the step cap";
    throw ExperimentError(msg.str());
  }
  result.frequency_l = absorbed > 0 ? static_cast<double>(left_count) / absorbed : 0.0;
  result.ci_halfwidth =
      3.0 * std::sqrt(result.frequency_l * (1.0 - result.frequency_l) / std::max<long>(absorbed, 1));
  return result;
}

EnergyDriftResult energy_drift_scan(const std::vector<int>& n_values, double o,
                                    const DriftOptions& options) {
  if (n_values.empty()) throw std::invalid_argument("energy_drift_scan: empty N grid");
  if (o == 0.0 && !options.absolute_horizon) {
    throw std::invalid_argument("energy_drift_scan with o = 0 requires an absolute horizon");
  }
  if (options.n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");

  EnergyDriftResult result;
  result.n_values = n_values;
  result.max_drifts.resize(n_values.size());
  result.tau_values.resize(n_values.size());

  parallel_for(n_values.size(), options.threads, [&](std::size_t i) {
    const int n = n_values[i];
    const ThinSpectrumModel model = build_model(options.kind, n, options.cutoff, options.coupling_j);
    double horizon;
    if (o > 0.0) {
      const double tau = mode_cat_collapse_time(model, o, options.threshold);
      result.tau_values[i] = tau;
      horizon = options.horizon_tau_mult * tau;
    } else {
      result.tau_values[i] = 0.0;
      horizon = *options.absolute_horizon;
    }

    const BranchPair branches = equilibrium_branch_states(model, options.kappa_ref);
    const QuantumState cat = weighted_cat(branches, 0.5);
    std::vector<double> grid(options.n_samples);
    for (int k = 0; k < options.n_samples; ++k) {
      grid[k] = horizon * static_cast<double>(k) / (options.n_samples - 1);
    }
    PropagatorConfig config;
    config.field_strength_o = o;
    config.time_step = horizon / (options.n_samples - 1);
    const TrajectoryRecord rec = evolve_trajectory(cat, model, config, grid);
    double drift = 0.0;
    for (Eigen::Index k = 0; k < rec.energy.size(); ++k) {
      drift = std::max(drift, std::abs(rec.energy[k] - rec.energy[0]));
    }
    result.max_drifts[i] = drift;
  });

  if (o > 0.0) {
    std::vector<double> nv(n_values.begin(), n_values.end());
    const LinearFit fit = log_log_fit(nv, result.max_drifts);
    result.fit_slope = fit.slope;
    result.fit_intercept = fit.intercept;
    result.fit_r_squared = fit.r_squared;
  }
  return result;
}

EquilibriumScanTable equilibrium_order_scan(int n_particles, const std::vector<double>& b_values,
                                            ModelKind kind, int cutoff, double coupling_j) {
  if (b_values.empty()) throw std::invalid_argument("equilibrium_order_scan: empty b grid");
  for (std::size_t i = 0; i < b_values.size(); ++i) {
    if (b_values[i] < 0.0) throw std::invalid_argument("b_values must be non-negative");
    if (i > 0 && !(b_values[i] > b_values[i - 1])) {
      throw std::invalid_argument("b_values must be increasing");
    }
  }
  const ThinSpectrumModel model = build_model(kind, n_particles, cutoff, coupling_j);
  EquilibriumScanTable table;
  table.n_particles = n_particles;
  table.rows.reserve(b_values.size());
  for (double b : b_values) {
    const EquilibriumResult eq = broken_ground_state(model, b);
    table.rows.push_back({b, n_particles * b, eq.order_expectation / (n_particles / 4.0),
                          eq.truncation_warning});
  }
  return table;
}

EquilibriumCollapseResult equilibrium_collapse(const std::vector<int>& n_values,
                                               const std::vector<double>& nb_values, ModelKind kind,
                                               int cutoff, double coupling_j) {
  if (n_values.empty()) throw std::invalid_argument("equilibrium_collapse: empty N grid");
  EquilibriumCollapseResult result;
  for (int n : n_values) {
    std::vector<double> b_values;
    b_values.reserve(nb_values.size());
    for (double nb : nb_values) b_values.push_back(nb / n);
    result.tables.push_back(equilibrium_order_scan(n, b_values, kind, cutoff, coupling_j));
  }
  for (std::size_t j = 0; j < nb_values.size(); ++j) {
    double lo = result.tables[0].rows[j].order_norm;
    double hi = lo;
    for (const auto& t : result.tables) {
      lo = std::min(lo, t.rows[j].order_norm);
      hi = std::max(hi, t.rows[j].order_norm);
    }
    result.max_spread = std::max(result.max_spread, hi - lo);
  }
  return result;
}

}  // namespace thinspec
