#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spde_lrt {

// Parameter outside the admissible range of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The explicit scheme would not contract for the requested grid.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, std::int64_t required_steps)
      : std::runtime_error(what), required_steps_(required_steps) {}

  std::int64_t required_steps() const noexcept { return required_steps_; }

 private:
  std::int64_t required_steps_;
};

// A statistic that cannot be formed from the given path (e.g. Q == 0 for the MLE).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spde_lrt
