#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace paw1d {

enum class ErrorCode {
  invalid_argument,
  root_count_mismatch,
  singular_matching,
  ill_conditioned_gram,
  not_positive_definite,
  no_convergence,
  assumption_violated,
  degenerate_fit,
};

std::string_view to_string(ErrorCode code);

// Base of every error raised by the library. `code()` is what sweeps record
// per row and what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when user-facing parameters violate a documented constraint.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCode::invalid_argument, message) {}
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(long pivot, const std::string& context);
  // Zero-based index of the first failing Cholesky pivot.
  long pivot() const noexcept { return pivot_; }

 private:
  long pivot_;
};

class IllConditionedGram : public Error {
 public:
  IllConditionedGram(double condition, const std::string& context);
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

// Numerical failures are everything except validation errors.
inline bool is_numerical(ErrorCode code) { return code != ErrorCode::invalid_argument; }

}  // namespace paw1d
