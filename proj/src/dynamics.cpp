#include "thinspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "thinspec/errors.hpp"

namespace thinspec {

namespace {

constexpr double kSingleShotExponentCap = 500.0;
constexpr double kLogNormOverflow = 709.0;  // log of largest double, minus slack

ComplexMatrix make_generator(const Vector& energies, const Matrix& coupling) {
  ComplexMatrix k = Complex(0.0, -1.0) * coupling.cast<Complex>();
  k.diagonal() += energies.cast<Complex>();
  return k;
}

void fix_phase_complex(ComplexVector& v) {
  Eigen::Index ref = 0;
  if (std::abs(v[0]) < 1e-12 * v.norm()) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-12 * v.norm()) { ref = i; break; }
    }
  }
  const double a = std::abs(v[ref]);
  if (a > 0.0) v *= std::conj(v[ref]) / a;
}

double max_abs_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void check_dims(const QuantumState& state, const ThinSpectrumModel& model) {
  if (state.dim() != model.cutoff) throw std::invalid_argument("state/model dimension mismatch");
}

// Truncated-Taylor action of exp(-i h K) on a vector; terms are added until
// the running term drops below tol relative to the accumulated result.
ComplexVector taylor_step(const ComplexMatrix& k, const ComplexVector& psi, double h, double tol) {
  ComplexVector acc = psi;
  ComplexVector term = psi;
  const Complex factor(0.0, -h);
  for (int order = 1; order <= 200; ++order) {
    term = (factor / static_cast<double>(order)) * (k * term);
    acc += term;
    if (term.norm() <= tol * acc.norm()) return acc;
  }
  throw NumericalError("taylor_step: series did not converge in 200 terms");
}

struct SteppedResult {
  ComplexVector state;
  double log_norm = 0.0;
};

SteppedResult stepped_propagate(const ComplexMatrix& k, const ComplexVector& psi0, double t,
                                const PropagatorConfig& config) {
  if (t == 0.0) return {psi0, 0.0};
  const double knorm = k.cwiseAbs().rowwise().sum().maxCoeff();  // ||K||_inf
  const double h_target = std::min(config.time_step, 1.0 / std::max(knorm, 1e-300));
  const int nsub = std::max(1, static_cast<int>(std::ceil(t / h_target)));
  const double h = t / nsub;
  const double tol = config.rel_tolerance / static_cast<double>(nsub);

  ComplexVector psi = psi0;
  double log_norm = 0.0;
  for (int i = 0; i < nsub; ++i) {
    psi = taylor_step(k, psi, h, tol);
    const double n = psi.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw NumericalError("stepped propagation lost the state norm");
    }
    log_norm += std::log(n);
    psi /= n;
  }
  return {psi, log_norm};
}

}  // namespace

void PropagatorConfig::validate() const {
  if (field_strength_o < 0.0) throw std::invalid_argument("field_strength_o must be >= 0");
  if (!(time_step > 0.0)) throw std::invalid_argument("time_step must be > 0");
  if (!(rel_tolerance > 0.0) || rel_tolerance > 1e-4) {
    throw std::invalid_argument("rel_tolerance must lie in (0, 1e-4]");
  }
}

ComplexMatrix generator(const ThinSpectrumModel& model, double o) {
  if (o < 0.0) throw std::invalid_argument("o must be >= 0");
  return make_generator(model.energies, o * model.order_param);
}

SpectralPropagator::SpectralPropagator(const Vector& energies, const Matrix& coupling)
    : SpectralPropagator(make_generator(energies, coupling)) {}

SpectralPropagator::SpectralPropagator(const ComplexMatrix& k) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(k);
  if (solver.info() != Eigen::Success) throw NumericalError("complex eigensolver failed");

  const Eigen::Index m = k.rows();
  std::vector<Eigen::Index> order(m);
  std::iota(order.begin(), order.end(), 0);
  const ComplexVector& ev = solver.eigenvalues();
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return ev[a].imag() > ev[b].imag(); });

  lam_.resize(m);
  vecs_.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    lam_[i] = ev[order[i]];
    vecs_.col(i) = solver.eigenvectors().col(order[i]);
  }

  const double kscale = k.norm();  // Frobenius
  const double resid = (k * vecs_ - vecs_ * lam_.asDiagonal()).cwiseAbs().colwise().sum().maxCoeff();
  if (resid > 1e-10 * std::max(kscale, 1e-300)) {
    throw NumericalError("spectral residual exceeds 1e-10 ||K||");
  }
  lu_.compute(vecs_);
  gmax_ = lam_[0].imag();
}

std::pair<ComplexVector, double> SpectralPropagator::evaluate(const ComplexVector& psi0,
                                                              double t) const {
  ComplexVector c = lu_.solve(psi0);
  // Shift growth by gmax so every amplitude factor stays bounded; the common
  // factor exp(gmax t) is restored in the log.
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c[i] *= std::exp(Complex((lam_[i].imag() - gmax_) * t, -lam_[i].real() * t));
  }
  ComplexVector psi = vecs_ * c;
  const double n = psi.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw NumericalError("spectral evaluation lost the state norm");
  }
  return {psi / n, std::log(n) + gmax_ * t};
}

std::pair<QuantumState, double> propagate(const QuantumState& state, const ThinSpectrumModel& model,
                                          const PropagatorConfig& config, double t) {
  config.validate();
  check_dims(state, model);
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  const double o = config.field_strength_o;

  const bool single_shot =
      config.backend == Backend::DenseEigen || config.backend == Backend::ScalingSquaring;
  if (single_shot && o * t * max_abs_entry(model.order_param) > kSingleShotExponentCap) {
    throw OverflowError(
        "propagate: o*t*max|O| exceeds the single-shot cap; use a shorter t or the "
        "SteppedIntegration backend with per-step renormalization");
  }

  double log_norm = 0.0;
  ComplexVector psi;
  switch (config.backend) {
    case Backend::DenseEigen: {
      SpectralPropagator prop(model.energies, o * model.order_param);
      auto [p, ln] = prop.evaluate(state.amplitudes(), t);
      psi = std::move(p);
      log_norm = ln;
      break;
    }
    case Backend::ScalingSquaring: {
      const ComplexMatrix u = (Complex(0.0, -t) * generator(model, o)).exp();
      ComplexVector raw = u * state.amplitudes();
      const double n = raw.norm();
      if (!(n > 0.0) || !std::isfinite(n)) throw OverflowError("propagate: raw norm overflowed");
      psi = raw / n;
      log_norm = std::log(n);
      break;
    }
    case Backend::SteppedIntegration: {
      const ComplexMatrix k = generator(model, o);
      auto r = stepped_propagate(k, state.amplitudes(), t, config);
      psi = std::move(r.state);
      log_norm = r.log_norm;
      break;
    }
  }
  if (log_norm > kLogNormOverflow) {
    throw OverflowError("propagate: raw norm exceeds the representable range; evolve in steps");
  }
  return {QuantumState(std::move(psi), true), std::exp(log_norm)};
}

TrajectoryRecord evolve_trajectory(
    const QuantumState& state, const ThinSpectrumModel& model, const PropagatorConfig& config,
    const std::vector<double>& t_grid,
    const std::optional<std::pair<QuantumState, QuantumState>>& branches) {
  config.validate();
  check_dims(state, model);
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw std::invalid_argument("t_grid must start at 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("t_grid must be strictly increasing");
  }
  if (branches) {
    if (branches->first.dim() != model.cutoff || branches->second.dim() != model.cutoff) {
      throw std::invalid_argument("branch states have wrong dimension");
    }
  }

  const double o = config.field_strength_o;
  const ComplexMatrix k = generator(model, o);
  std::optional<SpectralPropagator> spectral;
  if (config.backend == Backend::DenseEigen) {
    spectral.emplace(model.energies, o * model.order_param);
  }

  const Eigen::Index npts = static_cast<Eigen::Index>(t_grid.size());
  TrajectoryRecord rec;
  rec.times.resize(npts);
  rec.log_raw_norm.resize(npts);
  rec.energy.resize(npts);
  rec.order_param.resize(npts);
  if (branches) rec.branch_overlaps = std::make_pair(Vector(npts), Vector(npts));

  ComplexVector psi = state.amplitudes();
  double log_norm = 0.0;
  const ComplexMatrix o_c = model.order_param.cast<Complex>();

  for (Eigen::Index i = 0; i < npts; ++i) {
    const double dt = (i == 0) ? 0.0 : t_grid[i] - t_grid[i - 1];
    if (i > 0) {
      try {
        if (spectral) {
          auto [p, ln] = spectral->evaluate(psi, dt);
          psi = std::move(p);
          log_norm += ln;
        } else if (config.backend == Backend::ScalingSquaring) {
          ComplexVector raw = (Complex(0.0, -dt) * k).exp() * psi;
          const double n = raw.norm();
          if (!(n > 0.0) || !std::isfinite(n)) throw OverflowError("raw norm overflowed");
          psi = raw / n;
          log_norm += std::log(n);
        } else {
          auto r = stepped_propagate(k, psi, dt, config);
          psi = std::move(r.state);
          log_norm += r.log_norm;
        }
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << e.what() << " (at grid time t = " << t_grid[i] << ")";
        throw ExperimentError(msg.str());
      }
    }
    rec.times[i] = t_grid[i];
    rec.log_raw_norm[i] = log_norm;
    rec.energy[i] = std::real(psi.dot(model.energies.cast<Complex>().asDiagonal() * psi));
    rec.order_param[i] = std::real(psi.dot(o_c * psi));
    if (branches) {
      rec.branch_overlaps->first[i] = std::norm(branches->first.amplitudes().dot(psi));
      rec.branch_overlaps->second[i] = std::norm(branches->second.amplitudes().dot(psi));
    }
  }
  return rec;
}

DominantMode dominant_mode_general(const Vector& energies, const Matrix& coupling) {
  SpectralPropagator prop(energies, coupling);
  const ComplexVector& lam = prop.eigenvalues();
  const double g1 = lam[0].imag();
  const double g2 = lam[1].imag();
  if (std::abs(g1 - g2) <= 1e-9 * std::max(std::abs(g1), std::abs(g2))) {
    throw DegeneracyError("dominant_mode: two leading growth rates within 1e-9 relative; perturb o");
  }
  ComplexVector v = prop.eigenvectors().col(0);
  v /= v.norm();
  fix_phase_complex(v);
  return {QuantumState(std::move(v), true), g1};
}

DominantMode dominant_mode(const ThinSpectrumModel& model, double o) {
  if (!(o > 0.0)) throw std::invalid_argument("dominant_mode requires o > 0");
  return dominant_mode_general(model.energies, o * model.order_param);
}

PerturbationSplit project_perturbation(const Matrix& perturbation, const ThinSpectrumModel& model) {
  if (perturbation.rows() != model.cutoff || perturbation.cols() != model.cutoff) {
    throw std::invalid_argument("project_perturbation: dimension mismatch");
  }
  if ((perturbation - perturbation.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, perturbation.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("project_perturbation: perturbation must be symmetric");
  }
  const double oo = model.order_param.cwiseProduct(model.order_param).sum();
  if (oo == 0.0) throw std::invalid_argument("project_perturbation: order parameter is identically zero");
  const double po = perturbation.cwiseProduct(model.order_param).sum();
  PerturbationSplit split;
  split.o_parallel = po / oo;
  split.remainder = perturbation - split.o_parallel * model.order_param;
  return split;
}

std::optional<double> first_crossing_time(const QuantumState& state, const ThinSpectrumModel& model,
                                          double o, const QuantumState& target, double threshold,
                                          double time_step, double horizon) {
  check_dims(state, model);
  check_dims(target, model);
  if (!(threshold > 0.0) || !(threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1)");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (!(time_step > 0.0)) throw std::invalid_argument("time_step must be > 0");

  SpectralPropagator prop(model.energies, o * model.order_param);
  const ComplexVector psi0 = state.amplitudes();
  const ComplexVector& tgt = target.amplitudes();
  auto overlap_at = [&](double t) {
    return std::norm(tgt.dot(prop.evaluate(psi0, t).first));
  };

  if (overlap_at(0.0) >= threshold) return 0.0;

  // Bracket by doubling from the configured time step. Overlap vs time is
  // not globally monotone, so this locates the first crossing at the
  // resolution of the doubling ladder, then refines by bisection.
  double lo = 0.0;
  double hi = time_step;
  bool bracketed = false;
  while (hi < horizon) {
    if (overlap_at(hi) >= threshold) { bracketed = true; break; }
    lo = hi;
    hi *= 2.0;
  }
  if (!bracketed) {
    hi = horizon;
    if (overlap_at(horizon) < threshold) return std::nullopt;
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (overlap_at(mid) >= threshold) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<double> collapse_time(const QuantumState& state, const ThinSpectrumModel& model,
                                    const PropagatorConfig& config, const QuantumState& target,
                                    double threshold, std::optional<double> horizon) {
  config.validate();
  if (!(threshold > 0.5) || !(threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0.5, 1)");
  }
  const double o = config.field_strength_o;
  double tmax = 0.0;
  if (horizon) {
    tmax = *horizon;
  } else if (o > 0.0) {
    tmax = 1e3 / (model.n_particles * o);
  } else {
    throw std::invalid_argument("collapse_time with o = 0 requires an explicit horizon");
  }
  return first_crossing_time(state, model, o, target, threshold, config.time_step, tmax);
}

}  // namespace thinspec
