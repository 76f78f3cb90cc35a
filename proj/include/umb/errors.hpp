#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace umb {

/// Evaluation failed at a concrete chart point (singular metric, sqrt of a
/// negative value, ...). Carries the offending point when the caller knows it.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what, std::vector<double> where = {})
      : std::runtime_error(what), where_(std::move(where)) {}

  const std::vector<double>& where() const noexcept { return where_; }

private:
  std::vector<double> where_;
};

/// An operation was invoked on inputs that violate its stated precondition
/// (e.g. a curvature relation that only holds at umbilical points).
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Requested catalogue entry or feature exists in the interface but is not
/// supported by this build.
class UnsupportedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace umb
