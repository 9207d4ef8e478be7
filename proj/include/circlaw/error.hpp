#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circlaw {

enum class ErrorCode {
  invalid_argument,
  invalid_spec,
  domain,
  eigensolver,
  branch_failure,
  tolerance,
  resolution,
  singularity,
  invariant_violation,
  not_implemented,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a category so that callers
/// (the C API in particular) can map it onto a stable status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace circlaw
