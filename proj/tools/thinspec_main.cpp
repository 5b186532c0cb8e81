// thinspec: config-driven experiments on thin-spectrum models under
// non-unitary time evolution. Units: hbar = 1, energies in J, times in
// hbar/J. See README.md for the per-subcommand config schemas.

#include <CLI11.hpp>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "thinspec/config.hpp"
#include "thinspec/errors.hpp"
#include "thinspec/experiments.hpp"
#include "thinspec/oracle.hpp"
#include "thinspec/output.hpp"
#include "thinspec/version.hpp"

namespace ts = thinspec;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  unsigned long long seed = ts::kDefaultSeed;
  bool seed_given = false;
  int threads = 1;
  bool dry_run = false;
};

ts::ModelKind parse_kind(const std::string& kind) {
  if (kind == "ladder") return ts::ModelKind::Ladder;
  if (kind == "lieb_mattis") return ts::ModelKind::LiebMattis;
  throw ts::ConfigError("config key 'kind': expected 'ladder' or 'lieb_mattis', got '" + kind + "'");
}

ts::Backend parse_backend(const std::string& b) {
  if (b == "dense_eigen") return ts::Backend::DenseEigen;
  if (b == "scaling_squaring") return ts::Backend::ScalingSquaring;
  if (b == "stepped") return ts::Backend::SteppedIntegration;
  throw ts::ConfigError(
      "config key 'backend': expected dense_eigen|scaling_squaring|stepped, got '" + b + "'");
}

ts::FieldStrategy parse_strategy(const std::string& s) {
  if (s == "martingale_bias") return ts::FieldStrategy::MartingaleBias;
  if (s == "symmetric_flip") return ts::FieldStrategy::SymmetricFlip;
  throw ts::ConfigError(
      "config key 'strategy': expected martingale_bias|symmetric_flip, got '" + s + "'");
}

// Runs one subcommand: resolves the config, optionally stops at --dry-run
// (the body resolves its keys and skips the computation), otherwise writes
// tables + manifest.
int run_subcommand(const CommonArgs& args,
                   const std::function<std::vector<ts::ResultTable>(ts::Config&)>& body) {
  try {
    ts::Config config = ts::Config::parse_file(args.config_path);
    const std::string started = ts::iso8601_utc_now();
    std::vector<ts::ResultTable> tables = body(config);
    config.finish();
    if (args.dry_run) {
      std::cout << "# effective config (hash " << config.hash_hex() << ")\n"
                << config.canonical();
      return 0;
    }
    ts::RunManifest manifest;
    manifest.config_hash = config.hash_hex();
    manifest.seed = args.seed;
    manifest.tool_version = ts::kVersion;
    manifest.started = started;
    for (const auto& table : tables) {
      for (auto& path : ts::write_table(args.out_dir, table, manifest.config_hash)) {
        manifest.outputs.push_back(path);
      }
    }
    manifest.finished = ts::iso8601_utc_now();
    ts::write_manifest(args.out_dir, manifest);
    return 0;
  } catch (const ts::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "experiment error: " << e.what() << "\n";
    return 2;
  }
}

nlohmann::json num(double v) { return v; }

std::vector<ts::ResultTable> run_spectrum(ts::Config& cfg, const CommonArgs& args) {
  const auto kind = parse_kind(cfg.get_string("kind", "ladder"));
  const int n = cfg.get_int("n_particles", 256);
  const int cutoff = cfg.get_int("cutoff", 64);
  const double j = cfg.get_double("coupling_j", 1.0);
  if (args.dry_run) return {};
  const ts::ThinSpectrumModel model = ts::build_model(kind, n, cutoff, j);

  ts::ResultTable t;
  t.name = "spectrum";
  t.columns = {"n", "energy", "coupling_to_next"};
  for (int i = 0; i < cutoff; ++i) {
    t.rows.push_back({i, num(model.energies[i]),
                      i + 1 < cutoff ? num(model.order_param(i, i + 1)) : nlohmann::json()});
  }
  return {t};
}

std::vector<ts::ResultTable> run_equilibrium(ts::Config& cfg, const CommonArgs& args) {
  const auto kind = parse_kind(cfg.get_string("kind", "ladder"));
  const auto n_values = cfg.get_int_list("n_values", {256, 1024, 4096});
  const auto nb_values = cfg.get_double_list("nb_values", {0.0, 8.0, 16.0, 32.0, 64.0});
  const int cutoff = cfg.get_int("cutoff", 96);
  const double j = cfg.get_double("coupling_j", 1.0);
  if (args.dry_run) return {};

  const auto collapse = ts::equilibrium_collapse(n_values, nb_values, kind, cutoff, j);
  ts::ResultTable t;
  t.name = "equilibrium";
  t.columns = {"n_particles", "b", "n_times_b", "order_norm", "truncation_warning", "max_spread"};
  for (const auto& table : collapse.tables) {
    for (const auto& row : table.rows) {
      t.rows.push_back({table.n_particles, num(row.b), num(row.n_times_b), num(row.order_norm),
                        row.truncation_warning, nlohmann::json()});
    }
  }
  t.rows.push_back({nlohmann::json(), nlohmann::json(), nlohmann::json(), nlohmann::json(),
                    nlohmann::json(), num(collapse.max_spread)});
  return {t};
}

std::vector<ts::ResultTable> run_evolve(ts::Config& cfg, const CommonArgs& args) {
  const auto kind = parse_kind(cfg.get_string("kind", "ladder"));
  const int n = cfg.get_int("n_particles", 1024);
  const int cutoff = cfg.get_int("cutoff", 64);
  const double j = cfg.get_double("coupling_j", 1.0);
  const double o = cfg.get_double("o", 1e-3);
  const double t_max = cfg.get_double("t_max", 20.0);
  const int n_steps = cfg.get_int("n_steps", 400);
  const std::string initial = cfg.get_string("initial", "equilibrium_cat");
  const double kappa_ref = cfg.get_double("kappa_ref", 1000.0);
  const double weight_left = cfg.get_double("weight_left", 0.5);
  const int basis_index = cfg.get_int("basis_index", 0);

  ts::PropagatorConfig pconfig;
  pconfig.field_strength_o = o;
  pconfig.backend = parse_backend(cfg.get_string("backend", "dense_eigen"));
  pconfig.time_step = cfg.get_double("time_step", 0.1);
  pconfig.rel_tolerance = cfg.get_double("rel_tolerance", 1e-10);
  if (n_steps < 1) throw ts::ConfigError("config key 'n_steps': must be >= 1");
  if (!(t_max > 0.0)) throw ts::ConfigError("config key 't_max': must be > 0");
  if (args.dry_run) return {};

  const ts::ThinSpectrumModel model = ts::build_model(kind, n, cutoff, j);
  std::optional<std::pair<ts::QuantumState, ts::QuantumState>> branches;
  std::optional<ts::QuantumState> psi0;
  if (initial == "equilibrium_cat") {
    const auto pair = ts::equilibrium_branch_states(model, kappa_ref);
    psi0 = ts::weighted_cat(pair, weight_left);
    branches = std::make_pair(pair.left, pair.right);
  } else if (initial == "mode_cat") {
    const auto pair = ts::mode_branch_states(model, o);
    psi0 = ts::weighted_cat(pair, weight_left);
    branches = std::make_pair(pair.left, pair.right);
  } else if (initial == "symmetric") {
    psi0 = ts::symmetric_ground_state(model);
  } else if (initial == "basis") {
    psi0 = ts::QuantumState::basis_state(cutoff, basis_index);
  } else {
    throw ts::ConfigError(
        "config key 'initial': expected equilibrium_cat|mode_cat|symmetric|basis, got '" +
        initial + "'");
  }

  std::vector<double> grid(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) grid[i] = t_max * i / n_steps;
  const ts::TrajectoryRecord rec = ts::evolve_trajectory(*psi0, model, pconfig, grid, branches);

  ts::ResultTable t;
  t.name = "trajectory";
  t.columns = {"t", "log_raw_norm", "energy", "order_param", "overlap_left", "overlap_right"};
  for (Eigen::Index i = 0; i < rec.times.size(); ++i) {
    t.rows.push_back({num(rec.times[i]), num(rec.log_raw_norm[i]), num(rec.energy[i]),
                      num(rec.order_param[i]),
                      branches ? num(rec.branch_overlaps->first[i]) : nlohmann::json(),
                      branches ? num(rec.branch_overlaps->second[i]) : nlohmann::json()});
  }
  return {t};
}

ts::ResultTable scan_table(const std::string& name, const std::string& x_name,
                           const ts::ScalingScanResult& scan) {
  ts::ResultTable t;
  t.name = name;
  t.columns = {x_name, "tau", "log_" + x_name, "log_tau",
               "fit_slope", "fit_intercept", "fit_r_squared"};
  for (std::size_t i = 0; i < scan.x_values.size(); ++i) {
    t.rows.push_back({num(scan.x_values[i]), num(scan.collapse_times[i]),
                      num(std::log(scan.x_values[i])), num(std::log(scan.collapse_times[i])),
                      nlohmann::json(), nlohmann::json(), nlohmann::json()});
  }
  t.rows.push_back({nlohmann::json(), nlohmann::json(), nlohmann::json(), nlohmann::json(),
                    num(scan.fit_slope), num(scan.fit_intercept), num(scan.fit_r_squared)});
  return t;
}

std::vector<ts::ResultTable> run_collapse_scan(ts::Config& cfg, const CommonArgs& args) {
  ts::ScanOptions options;
  options.kind = parse_kind(cfg.get_string("kind", "ladder"));
  options.cutoff = cfg.get_int("cutoff", 64);
  options.coupling_j = cfg.get_double("coupling_j", 1.0);
  options.threshold = cfg.get_double("threshold", 0.99);
  options.threads = args.threads;
  const auto n_values = cfg.get_int_list("n_values", {512, 1024, 2048, 4096, 8192});
  const double o = cfg.get_double("o", 1e-3);
  const int dual_n = cfg.get_int("dual_n", 1024);
  const auto dual_o = cfg.get_double_list(
      "dual_o_values", {1e-4, 1.7782794100389228e-4, 3.1622776601683794e-4, 5.623413251903491e-4,
                        1e-3, 1.7782794100389228e-3, 3.1622776601683794e-3, 5.623413251903491e-3,
                        1e-2});
  if (args.dry_run) return {};

  const auto in_n = ts::scaling_scan(n_values, o, options);
  const auto in_o = ts::scaling_scan_in_o(dual_n, dual_o, options);
  return {scan_table("collapse_scan_n", "n", in_n), scan_table("collapse_scan_o", "o", in_o)};
}

std::vector<ts::ResultTable> run_regime(ts::Config& cfg, const CommonArgs& args) {
  ts::RegimeOptions options;
  options.kind = parse_kind(cfg.get_string("kind", "ladder"));
  options.cutoff = cfg.get_int("cutoff", 64);
  options.coupling_j = cfg.get_double("coupling_j", 1.0);
  options.finite_overlap_weight = cfg.get_double("finite_overlap_weight", 0.25);
  options.delay_threshold = cfg.get_double("delay_threshold", 0.5);
  options.horizon_factor = cfg.get_double("horizon_factor", 1e4);
  options.threads = args.threads;
  const auto n_values = cfg.get_int_list("n_values", {64, 128, 256, 512, 1024});
  const double o = cfg.get_double("o", 2e-2);
  if (args.dry_run) return {};

  const auto [finite, zero] = ts::regime_study(n_values, o, options);
  ts::ResultTable t;
  t.name = "regime";
  t.columns = {"overlap_class", "n", "selection_delay"};
  for (std::size_t i = 0; i < finite.n_values.size(); ++i) {
    t.rows.push_back({"finite_overlap", finite.n_values[i], num(finite.selection_delays[i])});
  }
  for (std::size_t i = 0; i < zero.n_values.size(); ++i) {
    t.rows.push_back({"zero_overlap", zero.n_values[i], num(zero.selection_delays[i])});
  }
  return {t};
}

std::vector<ts::ResultTable> run_born(ts::Config& cfg, const CommonArgs& args) {
  ts::BornOptions options;
  const auto kind = parse_kind(cfg.get_string("kind", "ladder"));
  const int n = cfg.get_int("n_particles", 256);
  options.cutoff = cfg.get_int("cutoff", 48);
  options.coupling_j = cfg.get_double("coupling_j", 1.0);
  options.kappa_ref = cfg.get_double("kappa_ref", 50.0);
  options.dt_factor = cfg.get_double("dt_factor", 0.1);
  options.absorb_threshold = cfg.get_double("absorb_threshold", 0.999);
  options.max_steps = cfg.get_long("max_steps", 40000);
  options.threads = args.threads;
  const double o = cfg.get_double("o", 0.05);
  const auto weights = cfg.get_double_list("weight_initial", {0.3, 0.5, 0.7, 0.9});
  const long trials = cfg.get_long("trials", 10000);
  const auto strategy = parse_strategy(cfg.get_string("strategy", "martingale_bias"));
  if (args.dry_run) return {};

  ts::ResultTable t;
  t.name = "born";
  t.columns = {"strategy", "weight_initial", "trials", "frequency_l", "ci_halfwidth",
               "non_absorbed", "clamped_steps"};
  for (double w0 : weights) {
    const auto r = ts::born_ensemble(w0, trials, o, kind, n, strategy, args.seed, options);
    t.rows.push_back(
        {strategy == ts::FieldStrategy::MartingaleBias ? "martingale_bias" : "symmetric_flip",
         num(r.weight_initial), r.trials, num(r.frequency_l), num(r.ci_halfwidth), r.non_absorbed,
         r.clamped_steps});
  }
  return {t};
}

std::vector<ts::ResultTable> run_energy_drift(ts::Config& cfg, const CommonArgs& args) {
  ts::DriftOptions options;
  options.kind = parse_kind(cfg.get_string("kind", "ladder"));
  options.cutoff = cfg.get_int("cutoff", 64);
  options.coupling_j = cfg.get_double("coupling_j", 1.0);
  options.kappa_ref = cfg.get_double("kappa_ref", 1000.0);
  options.horizon_tau_mult = cfg.get_double("horizon_tau_mult", 3.0);
  options.n_samples = cfg.get_int("n_samples", 301);
  options.threshold = cfg.get_double("threshold", 0.99);
  options.absolute_horizon = cfg.get_optional_double("absolute_horizon");
  options.threads = args.threads;
  const auto n_values = cfg.get_int_list("n_values", {512, 1024, 2048, 4096, 8192});
  const double o = cfg.get_double("o", 1e-3);
  if (args.dry_run) return {};

  const auto r = ts::energy_drift_scan(n_values, o, options);
  ts::ResultTable t;
  t.name = "energy_drift";
  t.columns = {"n", "tau", "max_drift", "fit_slope", "fit_intercept", "fit_r_squared"};
  for (std::size_t i = 0; i < r.n_values.size(); ++i) {
    t.rows.push_back({r.n_values[i], num(r.tau_values[i]), num(r.max_drifts[i]), nlohmann::json(),
                      nlohmann::json(), nlohmann::json()});
  }
  t.rows.push_back({nlohmann::json(), nlohmann::json(), nlohmann::json(), num(r.fit_slope),
                    num(r.fit_intercept), num(r.fit_r_squared)});
  return {t};
}

std::vector<ts::ResultTable> run_oracle_check(ts::Config& cfg, const CommonArgs& args) {
  const int n_spins = cfg.get_int("n_spins", 8);
  const double j = cfg.get_double("coupling_j", 1.0);
  const double o = cfg.get_double("o", 1e-3);
  int cutoff = cfg.get_int("cutoff", 0);  // 0 = full sector
  const int sector = n_spins / 2 + 1;
  if (cutoff == 0) cutoff = sector;
  double t_max = cfg.get_double("t_max", 0.0);  // 0 = 2 * 1e3/(N o)
  if (t_max == 0.0) t_max = 2.0 * 1e3 / (n_spins * o);
  const int n_steps = cfg.get_int("n_steps", 40);
  if (args.dry_run) return {};

  const ts::FullSpinSystem system = ts::build_full_system(n_spins, j, 0.0);
  const ts::ThinSpectrumModel projected = ts::thin_sector_projection(system, cutoff);
  const ts::ThinSpectrumModel direct = ts::build_lieb_mattis_model(n_spins, cutoff, j);

  const double energy_err = (projected.energies - direct.energies).cwiseAbs().maxCoeff();
  const double order_err = (projected.order_param - direct.order_param).cwiseAbs().maxCoeff();

  // two-level superposition at the bottom of the tower
  ts::ComplexVector init = ts::ComplexVector::Zero(cutoff);
  init[0] = 1.0 / std::sqrt(2.0);
  init[1] = 1.0 / std::sqrt(2.0);
  std::vector<double> grid(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) grid[i] = t_max * i / n_steps;
  const double deviation =
      ts::full_evolution_check(system, direct, o, grid, ts::QuantumState(init));

  ts::ResultTable t;
  t.name = "oracle_check";
  t.columns = {"n_spins", "cutoff", "o", "t_max", "energy_projection_error",
               "order_projection_error", "evolution_max_deviation"};
  t.rows.push_back({n_spins, cutoff, num(o), num(t_max), num(energy_err), num(order_err),
                    num(deviation)});
  return {t};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin-spectrum models under non-unitary time evolution"};
  app.set_version_flag("--version", ts::kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"spectrum", "emit model energies and order-parameter couplings"},
      {"equilibrium", "broken-ground-state order parameter vs field, multi-N collapse"},
      {"evolve", "single trajectory with observables"},
      {"collapse-scan", "collapse-time scaling in N plus the dual scan in o"},
      {"regime", "selection delays for finite- and zero-overlap initial states"},
      {"born", "stochastic-field outcome statistics"},
      {"energy-drift", "max energy drift over a fixed multiple of tau(N)"},
      {"oracle-check", "full-Hilbert validation of the thin-spectrum reduction"},
  };
  for (const auto& [name, desc] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", args.config_path, "flat key-value config file")->required();
    sub->add_option("--out", args.out_dir, "output directory (default .)");
    sub->add_option("--seed", args.seed, "RNG seed (default " + std::to_string(ts::kDefaultSeed) + ")");
    sub->add_option("--threads", args.threads, "worker threads for grid/trial fan-out");
    sub->add_flag("--dry-run", args.dry_run, "print the resolved effective config and exit");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();

  const auto dispatch = [&](ts::Config& cfg) -> std::vector<ts::ResultTable> {
    if (name == "spectrum") return run_spectrum(cfg, args);
    if (name == "equilibrium") return run_equilibrium(cfg, args);
    if (name == "evolve") return run_evolve(cfg, args);
    if (name == "collapse-scan") return run_collapse_scan(cfg, args);
    if (name == "regime") return run_regime(cfg, args);
    if (name == "born") return run_born(cfg, args);
    if (name == "energy-drift") return run_energy_drift(cfg, args);
    if (name == "oracle-check") return run_oracle_check(cfg, args);
    throw std::logic_error("unhandled subcommand " + name);
  };
  return run_subcommand(args, dispatch);
}
