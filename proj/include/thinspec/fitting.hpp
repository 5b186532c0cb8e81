#pragma once

#include <vector>

namespace thinspec {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  std::vector<double> residuals;
};

// Ordinary least squares y = slope*x + intercept.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Fit of log(y) vs log(x); inputs must be positive.
LinearFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace thinspec
