#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace gausspoly {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (n, d) or another structural parameter violates its invariants.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bound or asymptotic formula was requested outside the range where it holds.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative numerical method ran out of refinement budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Points passed to a hyperplane fit are (numerically) affinely dependent.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration would visit more subsets than the configured guard.
class GuardExceeded : public std::runtime_error {
 public:
  GuardExceeded(double subsets, std::int64_t guard)
      : std::runtime_error("C(n,d) = " + format_count(subsets) + " exceeds subset guard " +
                           std::to_string(guard)),
        subsets_(subsets),
        guard_(guard) {}

  double subsets() const noexcept { return subsets_; }
  std::int64_t guard() const noexcept { return guard_; }

 private:
  static std::string format_count(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }

  double subsets_;
  std::int64_t guard_;
};

}  // namespace gausspoly
