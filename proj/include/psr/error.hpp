#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psr {

/// Machine-readable failure codes. Every exception thrown by the library
/// carries one of these so that reports can surface it verbatim.
enum class ErrorCode {
  // input validation
  syntax_error,
  inhomogeneous,
  unknown_variable,
  dimension_mismatch,
  domain_error,
  singular_matrix,
  non_positive_discriminant,
  degenerate_discriminant,
  out_of_range,
  non_positive_x,
  non_positive_s,
  non_positive_rho,
  unknown_id,
  not_symmetric,
  gradient_vanishes,
  not_psr_point,
  non_positive_h,
  invalid_argument,
  empty_scan,
  // numerical failures
  no_convergence,
  degenerate_hessian,
  sign_change_in_d,
  cross_check_failed,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::syntax_error: return "syntax_error";
    case ErrorCode::inhomogeneous: return "inhomogeneous";
    case ErrorCode::unknown_variable: return "unknown_variable";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::singular_matrix: return "singular_matrix";
    case ErrorCode::non_positive_discriminant: return "non_positive_discriminant";
    case ErrorCode::degenerate_discriminant: return "degenerate_discriminant";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::non_positive_x: return "non_positive_x";
    case ErrorCode::non_positive_s: return "non_positive_s";
    case ErrorCode::non_positive_rho: return "non_positive_rho";
    case ErrorCode::unknown_id: return "unknown_id";
    case ErrorCode::not_symmetric: return "not_symmetric";
    case ErrorCode::gradient_vanishes: return "gradient_vanishes";
    case ErrorCode::not_psr_point: return "not_psr_point";
    case ErrorCode::non_positive_h: return "non_positive_h";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::empty_scan: return "empty_scan";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::degenerate_hessian: return "degenerate_hessian";
    case ErrorCode::sign_change_in_d: return "sign_change_in_d";
    case ErrorCode::cross_check_failed: return "cross_check_failed";
  }
  return "unknown";
}

/// Numerical failures (as opposed to bad input) map to exit status 3.
constexpr bool is_numerical(ErrorCode code) noexcept {
  return code == ErrorCode::no_convergence || code == ErrorCode::degenerate_hessian ||
         code == ErrorCode::sign_change_in_d || code == ErrorCode::cross_check_failed;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace psr
