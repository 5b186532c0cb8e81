#pragma once

#include <stdexcept>
#include <string>

namespace thinspec {

// Raised when a scan or ensemble cannot produce a result (non-collapse at
// the horizon, too many non-absorbed trials, ...). CLI maps this to exit 2.
class ExperimentError : public std::runtime_error {
 public:
  explicit ExperimentError(const std::string& what) : std::runtime_error(what) {}
};

// Two leading growth rates too close to single out a dominant mode.
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

// Raw norm would leave the representable range.
class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// Eigensolver residual or similar numerical guarantee failed.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace thinspec
