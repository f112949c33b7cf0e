#pragma once

#include <stdexcept>
#include <string>

namespace admm_ilqr {

/// Kinematically impossible step (square-root or asin argument out of range).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Q_uu could not be made positive definite before the damping cap was hit.
class RegularizationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cyclic projection across overlapping keep-out ellipses did not settle.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterate left the interior of the log-barrier domain.
class BarrierDomainViolation : public std::runtime_error {
 public:
  BarrierDomainViolation(int time_index, const std::string& what)
      : std::runtime_error(what), time_index_(time_index) {}

  int time_index() const noexcept { return time_index_; }

 private:
  int time_index_;
};

class UnknownScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid or unreadable scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing an artifact failed; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace admm_ilqr
