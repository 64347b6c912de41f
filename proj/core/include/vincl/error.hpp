#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vincl {

enum class ErrorCode {
  dimension_mismatch,
  invalid_argument,
  invalid_exponent,
  non_finite,
  empty_set,
  insufficient_evidence,
  missing_constants,
  non_surjective,
  convergence_failure,
  divergence,
  index_out_of_range,
  parse_error,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is
/// stable and machine-readable; the message is for humans.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void throw_dimension_mismatch(std::string_view where, std::size_t lhs,
                                           std::size_t rhs);

}  // namespace vincl
