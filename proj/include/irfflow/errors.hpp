#ifndef IRFFLOW_ERRORS_HPP
#define IRFFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace irfflow {

/// Raised when a computation produces a non-finite value outside the places
/// where divergence is part of the algorithm (rejected proposals).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid experiment configuration (unknown names, bad numeric fields).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace irfflow

#endif  // IRFFLOW_ERRORS_HPP
