#include "paw1d/errors.hpp"

#include <cstdio>

namespace paw1d {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::root_count_mismatch: return "RootCountMismatch";
    case ErrorCode::singular_matching: return "SingularMatching";
    case ErrorCode::ill_conditioned_gram: return "IllConditionedGram";
    case ErrorCode::not_positive_definite: return "NotPositiveDefinite";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::assumption_violated: return "AssumptionViolated";
    case ErrorCode::degenerate_fit: return "DegenerateFit";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

NotPositiveDefinite::NotPositiveDefinite(long pivot, const std::string& context)
    : Error(ErrorCode::not_positive_definite,
            "overlap matrix is not positive definite (pivot " + std::to_string(pivot) + ")" +
                (context.empty() ? "" : ", " + context)),
      pivot_(pivot) {}

namespace {
std::string format_condition(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", c);
  return buf;
}
}  // namespace

IllConditionedGram::IllConditionedGram(double condition, const std::string& context)
    : Error(ErrorCode::ill_conditioned_gram,
            "Gram matrix condition number " + format_condition(condition) +
                (context.empty() ? "" : " (" + context + ")")),
      condition_(condition) {}

}  // namespace paw1d
