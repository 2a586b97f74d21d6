#pragma once

#include <stdexcept>
#include <string>

namespace lpr {

// Input outside an operation's mathematical domain (n = 0, d not dividing p-1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument valid in principle but beyond a precomputed table (e.g. u > u_max).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Work or memory would exceed a configured budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed. `trace` carries a JSON dump of the state, when available.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what, std::string trace = {})
      : std::logic_error(what), trace_(std::move(trace)) {}
  const std::string& trace() const noexcept { return trace_; }

 private:
  std::string trace_;
};

}  // namespace lpr
